//! Statevector simulation: the correctness oracle for every emitted circuit.
//!
//! [`StateVector`] is a dense amplitude array capped at [`MAX_DENSE_QUBITS`].
//! [`SparseState`] keeps only nonzero amplitudes and serves circuits whose
//! register is wider than the dense cap but whose support stays small, such as
//! the p-QPU builds with their extra ancillas. Basis index bit `i` is qubit `i`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::binom::binomial;
use crate::circuit::{Circuit, Gate, GateKind, Qubit};
use crate::error::{Error, Result};

pub const MAX_DENSE_QUBITS: usize = 24;
pub const MAX_SPARSE_QUBITS: usize = 64;

/// Amplitudes below this magnitude are dropped by the sparse engine.
const SPARSE_PRUNE: f64 = 1e-14;
/// Leakage threshold for ancilla restitution.
pub const LEAKAGE_TOL: f64 = 1e-12;

type Mat2 = [[Complex64; 2]; 2];

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// 2x2 matrix of a non-permutation single-qubit gate.
fn single_qubit_matrix(kind: GateKind) -> Option<Mat2> {
    let z = c(0.0);
    Some(match kind {
        GateKind::H => [[c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)], [c(FRAC_1_SQRT_2), c(-FRAC_1_SQRT_2)]],
        GateKind::T => [[c(1.0), z], [z, Complex64::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2)]],
        GateKind::Tdg => [[c(1.0), z], [z, Complex64::new(FRAC_1_SQRT_2, -FRAC_1_SQRT_2)]],
        GateKind::Ry(theta) => {
            let (s, co) = (libm::sin(theta / 2.0), libm::cos(theta / 2.0));
            [[c(co), c(-s)], [c(s), c(co)]]
        }
        _ => return None,
    })
}

/// Image of basis index `x` under a permutation gate. Every permutation
/// gate here is an involution.
fn permute(gate: &Gate, x: u64) -> u64 {
    let q = gate.qubits();
    let bit = |i: usize| (x >> q[i]) & 1 == 1;
    match gate.kind() {
        GateKind::X => x ^ (1 << q[0]),
        GateKind::Cx if bit(0) => x ^ (1 << q[1]),
        GateKind::Ccx if bit(0) && bit(1) => x ^ (1 << q[2]),
        GateKind::Cswap if bit(0) && bit(1) != bit(2) => x ^ (1 << q[1]) ^ (1 << q[2]),
        GateKind::FanOut if bit(0) => q[1..].iter().fold(x, |acc, &t| acc ^ (1 << t)),
        _ => x,
    }
}

/// Dense `2^n` amplitude vector.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>` on `n_qubits` qubits.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_dense(n_qubits)?;
        if index >> n_qubits != 0 {
            return Err(Error::Argument(format!("basis index {index} out of range")));
        }
        let mut amps = vec![c(0.0); 1 << n_qubits];
        amps[index] = c(1.0);
        Ok(StateVector { n_qubits, amps })
    }

    /// Wraps raw amplitudes; the norm must be 1 within `1e-10`.
    pub fn from_amplitudes(n_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        check_dense(n_qubits)?;
        if amps.len() != 1 << n_qubits {
            return Err(Error::Shape(format!("{} amplitudes for {n_qubits} qubits", amps.len())));
        }
        let s = StateVector { n_qubits, amps };
        let norm = s.norm_sqr();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::Normalization(norm));
        }
        Ok(s)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Largest elementwise distance to `other`.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn apply(&mut self, gate: &Gate) {
        match single_qubit_matrix(gate.kind()) {
            Some(m) => {
                let bit = 1usize << gate.qubits()[0];
                for base in (0..self.amps.len()).filter(|i| i & bit == 0) {
                    let (a0, a1) = (self.amps[base], self.amps[base | bit]);
                    self.amps[base] = m[0][0] * a0 + m[0][1] * a1;
                    self.amps[base | bit] = m[1][0] * a0 + m[1][1] * a1;
                }
            }
            None => {
                for i in 0..self.amps.len() {
                    let j = permute(gate, i as u64) as usize;
                    if j > i {
                        self.amps.swap(i, j);
                    }
                }
            }
        }
    }
}

fn check_dense(n_qubits: usize) -> Result<()> {
    if n_qubits > MAX_DENSE_QUBITS {
        Err(Error::TooLarge { qubits: n_qubits, limit: MAX_DENSE_QUBITS })
    } else {
        Ok(())
    }
}

/// `D(n, k)`: uniform amplitude on every weight-`k` string of length `n`.
pub fn dicke_state(n: usize, k: usize) -> Result<StateVector> {
    check_dense(n)?;
    if k > n {
        return Err(Error::Argument(format!("k = {k} exceeds n = {n}")));
    }
    let amp = c(1.0 / libm::sqrt(binomial(n as u32, k as u32) as f64));
    let mut amps = vec![c(0.0); 1 << n];
    for (i, a) in amps.iter_mut().enumerate() {
        if i.count_ones() as usize == k {
            *a = amp;
        }
    }
    Ok(StateVector { n_qubits: n, amps })
}

/// Applies `circuit` to `input` (or `|0...0>`). Macro gates are applied with
/// their exact permutation semantics.
pub fn run(circuit: &Circuit, input: Option<&StateVector>) -> Result<StateVector> {
    let mut state = match input {
        Some(s) if s.n_qubits != circuit.n_qubits() => {
            return Err(Error::Shape(format!(
                "state has {} qubits, circuit {}",
                s.n_qubits,
                circuit.n_qubits()
            )))
        }
        Some(s) => s.clone(),
        None => StateVector::zero(circuit.n_qubits())?,
    };
    for gate in circuit.gates() {
        state.apply(gate);
    }
    Ok(state)
}

fn subset_mask(n_qubits: usize, subset: &[Qubit]) -> Result<u64> {
    let mut mask = 0u64;
    for &q in subset {
        if q >= n_qubits || mask >> q & 1 == 1 {
            return Err(Error::Argument(format!("bad subset qubit {q}")));
        }
        mask |= 1 << q;
    }
    Ok(mask)
}

/// Gathers the bits of `x` at `subset` into a compact index (subset[0] is bit 0).
fn gather(x: u64, subset: &[Qubit]) -> usize {
    subset.iter().enumerate().fold(0, |acc, (i, &q)| acc | (((x >> q) & 1) as usize) << i)
}

/// Splits `state` as `phi (x) chi` with `phi` on `subset`. Returns `phi`
/// (normalized) and the residual norm of the best product approximation.
fn factor_out(state: &StateVector, subset: &[Qubit]) -> Result<(StateVector, f64)> {
    let mask = subset_mask(state.n_qubits, subset)?;
    let comp: Vec<Qubit> = (0..state.n_qubits).filter(|q| mask >> q & 1 == 0).collect();
    // Pick the complement configuration carrying the most weight as the reference slice.
    let mut weight = vec![0.0; 1 << comp.len()];
    for (x, a) in state.amps.iter().enumerate() {
        weight[gather(x as u64, &comp)] += a.norm_sqr();
    }
    let best = (0..weight.len()).fold(0, |b, i| if weight[i] > weight[b] { i } else { b });
    let mut phi = vec![c(0.0); 1 << subset.len()];
    for (x, a) in state.amps.iter().enumerate() {
        if gather(x as u64, &comp) == best {
            phi[gather(x as u64, subset)] = *a;
        }
    }
    let norm = libm::sqrt(phi.iter().map(|a| a.norm_sqr()).sum::<f64>());
    if norm == 0.0 {
        return Err(Error::Argument("zero state".into()));
    }
    phi.iter_mut().for_each(|a| *a /= norm);
    // chi(c) = <phi| state(., c); residual = |state|^2 - sum |chi|^2.
    let mut chi = vec![c(0.0); 1 << comp.len()];
    for (x, a) in state.amps.iter().enumerate() {
        chi[gather(x as u64, &comp)] += phi[gather(x as u64, subset)].conj() * a;
    }
    let captured: f64 = chi.iter().map(|z| z.norm_sqr()).sum();
    let residual = libm::sqrt((state.norm_sqr() - captured).max(0.0));
    Ok((StateVector { n_qubits: subset.len(), amps: phi }, residual))
}

/// `|<b|a>|^2`, or with `on_subset`, `|<b|a_S>|^2` where `a = a_S (x) rest`.
///
/// Fails with [`Error::NotAProduct`] when the qubits outside the subset are
/// entangled with it (residual above `1e-9`).
pub fn fidelity(a: &StateVector, b: &StateVector, on_subset: Option<&[Qubit]>) -> Result<f64> {
    let owned;
    let a = match on_subset {
        None => a,
        Some(subset) => {
            let (phi, residual) = factor_out(a, subset)?;
            if residual > 1e-9 {
                return Err(Error::NotAProduct(residual));
            }
            owned = phi;
            &owned
        }
    };
    if a.n_qubits != b.n_qubits {
        return Err(Error::Shape(format!("{} vs {} qubits", a.n_qubits, b.n_qubits)));
    }
    let overlap: Complex64 = b.amps.iter().zip(&a.amps).map(|(x, y)| x.conj() * y).sum();
    Ok(overlap.norm_sqr().min(1.0))
}

/// Probability of each Hamming weight `0..=|subset|` measured on `subset`.
pub fn hamming_marginal(state: &StateVector, subset: &[Qubit]) -> Vec<f64> {
    let mask = subset.iter().fold(0u64, |m, &q| m | 1 << q);
    let mut probs = vec![0.0; subset.len() + 1];
    for (x, a) in state.amps.iter().enumerate() {
        probs[(x as u64 & mask).count_ones() as usize] += a.norm_sqr();
    }
    probs
}

/// Probability mass on basis states with any ancilla bit set, and whether it
/// is within [`LEAKAGE_TOL`].
pub fn ancilla_clean(state: &StateVector, ancillas: &[Qubit]) -> (bool, f64) {
    let mask = ancillas.iter().fold(0u64, |m, &q| m | 1 << q);
    let leak: f64 = state
        .amps
        .iter()
        .enumerate()
        .filter(|(x, _)| *x as u64 & mask != 0)
        .map(|(_, a)| a.norm_sqr())
        .sum();
    (leak <= LEAKAGE_TOL, leak)
}

/// Sparse map from basis index to amplitude.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseState {
    n_qubits: usize,
    amps: BTreeMap<u64, Complex64>,
}

impl SparseState {
    pub fn basis(n_qubits: usize, index: u64) -> Result<Self> {
        if n_qubits > MAX_SPARSE_QUBITS {
            return Err(Error::TooLarge { qubits: n_qubits, limit: MAX_SPARSE_QUBITS });
        }
        if n_qubits < 64 && index >> n_qubits != 0 {
            return Err(Error::Argument(format!("basis index {index} out of range")));
        }
        let mut amps = BTreeMap::new();
        amps.insert(index, c(1.0));
        Ok(SparseState { n_qubits, amps })
    }

    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn support(&self) -> usize {
        self.amps.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, Complex64)> + '_ {
        self.amps.iter().map(|(&x, &a)| (x, a))
    }

    pub fn amplitude(&self, index: u64) -> Complex64 {
        self.amps.get(&index).copied().unwrap_or(c(0.0))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn apply(&mut self, gate: &Gate) {
        match single_qubit_matrix(gate.kind()) {
            Some(m) => {
                let q = gate.qubits()[0];
                let bit = 1u64 << q;
                let mut out: BTreeMap<u64, Complex64> = BTreeMap::new();
                for (&x, &a) in &self.amps {
                    let col = ((x >> q) & 1) as usize;
                    let base = x & !bit;
                    for (row, target) in [(0, base), (1, base | bit)] {
                        let v = m[row][col] * a;
                        if v != c(0.0) {
                            *out.entry(target).or_insert(c(0.0)) += v;
                        }
                    }
                }
                out.retain(|_, a| a.norm() > SPARSE_PRUNE);
                self.amps = out;
            }
            None => {
                self.amps = core::mem::take(&mut self.amps)
                    .into_iter()
                    .map(|(x, a)| (permute(gate, x), a))
                    .collect();
            }
        }
    }

    /// Probability mass with any of `qubits` set.
    pub fn leakage(&self, qubits: &[Qubit]) -> f64 {
        let mask = qubits.iter().fold(0u64, |m, &q| m | 1 << q);
        self.amps.iter().filter(|(&x, _)| x & mask != 0).map(|(_, a)| a.norm_sqr()).sum()
    }

    /// Dense state on `subset` from the entries whose other qubits are all
    /// zero. Check [`SparseState::leakage`] on the complement first.
    pub fn project_zero_complement(&self, subset: &[Qubit]) -> Result<StateVector> {
        check_dense(subset.len())?;
        let mask = subset.iter().fold(0u64, |m, &q| m | 1 << q);
        let mut amps = vec![c(0.0); 1 << subset.len()];
        for (&x, &a) in self.amps.iter().filter(|(&x, _)| x & !mask == 0) {
            amps[gather(x, subset)] = a;
        }
        Ok(StateVector { n_qubits: subset.len(), amps })
    }
}

/// Sparse counterpart of [`run`].
pub fn run_sparse(circuit: &Circuit, input: Option<&SparseState>) -> Result<SparseState> {
    let mut state = match input {
        Some(s) if s.n_qubits != circuit.n_qubits() => {
            return Err(Error::Shape(format!(
                "state has {} qubits, circuit {}",
                s.n_qubits,
                circuit.n_qubits()
            )))
        }
        Some(s) => s.clone(),
        None => SparseState::zero(circuit.n_qubits())?,
    };
    for gate in circuit.gates() {
        state.apply(gate);
    }
    Ok(state)
}
