//! Distributed Dicke-state preparation circuits.
//!
//! Data qubits come first (`0..n`, split into contiguous blocks), followed by
//! each QPU's ancillas. On every QPU, one-hot position 0 is the first ancilla
//! and position `t >= 1` is the block's `t - 1`-th data qubit; binary bit `l`
//! of the local weight register sits on one-hot position `2^(l+1)`, except
//! the top bit, which takes the second ancilla.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::binom::{binomial, bit_width, ceil_log2};
use crate::blocks::{
    binary_to_onehot, cqsp_real, dicke_unitary, load_k_minus, map_to_k_minus_j, onehot_to_unary, qsp_real,
    ripple_add, subtract, Register,
};
use crate::circuit::{Circuit, Gate, Qubit, QubitRole};
use crate::error::{Error, Result};
use crate::partition::{balanced_partition, block_sizes, data_ranges, Partition};
use crate::sim::{run, run_sparse, StateVector, LEAKAGE_TOL};

/// Registers up to this width are verified with the dense simulator; wider
/// ones, whose states stay sparse, with the sparse one.
pub const DENSE_VERIFY_QUBITS: usize = 16;

/// Largest infidelity a verified build may show.
pub const FIDELITY_TOL: f64 = 1e-9;

/// Target `D(n, k)` distributed over `p` QPUs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DickeSpec {
    pub n: usize,
    pub k: usize,
    pub p: usize,
}

impl DickeSpec {
    pub fn new(n: usize, k: usize, p: usize) -> Result<Self> {
        let spec = DickeSpec { n, k, p };
        spec.check()?;
        Ok(spec)
    }

    fn check(&self) -> Result<()> {
        if self.k > self.n {
            return Err(Error::Infeasible(format!("k = {} exceeds n = {}", self.k, self.n)));
        }
        if self.n > crate::binom::MAX_N as usize {
            return Err(Error::Argument(format!("n = {} exceeds {}", self.n, crate::binom::MAX_N)));
        }
        block_sizes(self.n, self.p).map(|_| ())
    }

    /// Data qubits per QPU.
    pub fn block_sizes(&self) -> Vec<usize> {
        block_sizes(self.n, self.p).unwrap_or_default()
    }

    /// True when `p` divides `n`.
    pub fn is_even_split(&self) -> bool {
        self.p != 0 && self.n.is_multiple_of(self.p)
    }

    /// Per-QPU excitation cap `min(h_i, k)`.
    pub fn k_prime(&self) -> Vec<usize> {
        self.block_sizes().into_iter().map(|h| h.min(self.k)).collect()
    }

    /// Width of the binary weight registers.
    pub fn register_width(&self) -> usize {
        bit_width(self.k as u64)
    }
}

/// Weight-distribution data for the p-QPU protocol.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightPlan {
    pub k_prime: Vec<usize>,
    /// Every feasible excitation tuple, in lexicographic order.
    pub tuples: Vec<Vec<usize>>,
    /// `tables[0]` holds QPU 0's marginal under key 0; `tables[i]` maps the
    /// partial sum `J_{i-1}` to the conditional amplitudes of `j_i`.
    pub tables: Vec<BTreeMap<usize, Vec<f64>>>,
}

/// `sqrt(C(h0, j) C(h1, k - j) / C(n, k))` for `j = 0..=k`.
pub fn dicke_amplitudes_2qpu(n: usize, k: usize) -> Result<Vec<f64>> {
    let spec = DickeSpec::new(n, k, 2).map_err(|e| match e {
        Error::Infeasible(msg) => Error::Argument(msg),
        e => e,
    })?;
    let h = spec.block_sizes();
    let total = binomial(n as u32, k as u32);
    Ok((0..=k)
        .map(|j| {
            let w = binomial(h[0] as u32, j as u32) * binomial(h[1] as u32, (k - j) as u32);
            libm::sqrt(w as f64 / total as f64)
        })
        .collect())
}

/// All `(j_0, ..., j_{p-1})` with `j_i <= min(h_i, k)` summing to `k`.
pub fn feasible_region(spec: &DickeSpec) -> Result<Vec<Vec<usize>>> {
    spec.check()?;
    let caps = spec.k_prime();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(spec.p);
    fn walk(caps: &[usize], left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        match caps.split_first() {
            None if left == 0 => out.push(cur.clone()),
            None => {}
            Some((&cap, rest)) => {
                for j in 0..=cap.min(left) {
                    cur.push(j);
                    walk(rest, left - j, cur, out);
                    cur.pop();
                }
            }
        }
    }
    walk(&caps, spec.k, &mut cur, &mut out);
    if out.is_empty() {
        return Err(Error::Infeasible(format!("no feasible distribution for {spec:?}")));
    }
    Ok(out)
}

/// `suffix[i][r]`: weighted count of ways QPUs `i..p` hold `r` excitations,
/// each tuple weighted by `prod C(h_t, j_t)`.
fn suffix_counts(spec: &DickeSpec) -> Vec<Vec<u128>> {
    let (h, caps, k) = (spec.block_sizes(), spec.k_prime(), spec.k);
    let mut suffix = vec![vec![0u128; k + 1]; spec.p + 1];
    suffix[spec.p][0] = 1;
    for i in (0..spec.p).rev() {
        for r in 0..=k {
            suffix[i][r] = (0..=caps[i].min(r))
                .map(|j| binomial(h[i] as u32, j as u32) * suffix[i + 1][r - j])
                .sum();
        }
    }
    suffix
}

/// `alpha_{J_i}`: weighted number of completions `(j_{i+1}, ..., j_{p-1})` of a
/// prefix with partial sum `J_i`.
pub fn alpha_partial(spec: &DickeSpec, i: usize, partial: usize) -> Result<u128> {
    spec.check()?;
    if spec.p < 2 || i > spec.p - 2 {
        return Err(Error::Domain(format!("stage {i} outside 0..={}", spec.p.saturating_sub(2))));
    }
    let reach: usize = spec.k_prime()[..=i].iter().sum();
    let alpha = if partial <= spec.k.min(reach) { suffix_counts(spec)[i + 1][spec.k - partial] } else { 0 };
    if alpha == 0 {
        return Err(Error::Domain(format!("partial sum {partial} unreachable at stage {i}")));
    }
    Ok(alpha)
}

/// Amplitude tables for QPUs `0..p-1`; the last QPU is determined by the rest.
fn stage_tables(spec: &DickeSpec) -> Vec<BTreeMap<usize, Vec<f64>>> {
    let (h, caps, k) = (spec.block_sizes(), spec.k_prime(), spec.k);
    let suffix = suffix_counts(spec);
    let mut tables = Vec::with_capacity(spec.p.saturating_sub(1));
    let mut reach = 0usize;
    for i in 0..spec.p.saturating_sub(1) {
        let mut table = BTreeMap::new();
        for partial in 0..=reach.min(k) {
            let left = k - partial;
            let den = suffix[i][left];
            if den == 0 {
                continue;
            }
            let row = (0..=caps[i].min(left))
                .map(|j| {
                    let num = binomial(h[i] as u32, j as u32) * suffix[i + 1][left - j];
                    libm::sqrt(num as f64 / den as f64)
                })
                .collect();
            table.insert(partial, row);
        }
        tables.push(table);
        reach += caps[i];
    }
    tables
}

pub fn weight_plan(spec: &DickeSpec) -> Result<WeightPlan> {
    let tuples = feasible_region(spec)?;
    Ok(WeightPlan { k_prime: spec.k_prime(), tuples, tables: stage_tables(spec) })
}

/// A built circuit with its QPU assignment.
#[derive(Debug, Clone, PartialEq)]
pub struct Build {
    pub spec: DickeSpec,
    /// May contain macro gates; call [`Circuit::decompose`] before measuring.
    pub circuit: Circuit,
    pub partition: Partition,
    pub ancillas_per_qpu: usize,
}

impl Build {
    pub fn data_qubits(&self) -> Range<Qubit> {
        0..self.spec.n
    }

    pub fn ancillas(&self) -> Range<Qubit> {
        self.spec.n..self.circuit.n_qubits()
    }

    /// Local qubit budget: the largest data block plus the ancillas.
    pub fn qubits_per_qpu(&self) -> usize {
        self.spec.block_sizes().into_iter().max().unwrap_or(0) + self.ancillas_per_qpu
    }
}

/// Qubits one QPU works with.
struct Local {
    data: Vec<Qubit>,
    onehot: Vec<Qubit>,
    /// Weight register; its low `bit_width(cap)` bits follow the one-hot layout.
    reg: Vec<Qubit>,
    /// Qubits left over for copies and scratch.
    spare: Vec<Qubit>,
    cap: usize,
}

impl Local {
    fn new(data: Range<Qubit>, anc: Range<Qubit>, cap: usize, width: usize) -> Local {
        let data: Vec<Qubit> = data.collect();
        let anc: Vec<Qubit> = anc.collect();
        let low = bit_width(cap as u64);
        let onehot: Vec<Qubit> = anc[..1].iter().chain(&data[..cap]).copied().collect();
        let mut reg: Vec<Qubit> = (0..low).map(|l| if l + 1 < low { data[(2 << l) - 1] } else { anc[1] }).collect();
        let mut pool: Vec<Qubit> =
            data.iter().chain(&anc[..1]).chain(&anc[2..]).copied().filter(|q| !reg.contains(q)).collect();
        let rest = pool.split_off(width.saturating_sub(low).min(pool.len()));
        reg.extend(pool);
        Local { data, onehot, reg, spare: rest, cap }
    }

    fn spare(&self, m: usize) -> Result<&[Qubit]> {
        self.spare.get(..m).ok_or(Error::Capacity { needed: m, available: self.spare.len() })
    }
}

struct Assembly {
    circuit: Circuit,
}

impl Assembly {
    fn add(&mut self, block: Result<Circuit>) -> Result<()> {
        self.circuit.extend(&block?)
    }

    fn copy(&mut self, from: &[Qubit], to: &[Qubit]) -> Result<()> {
        for (&a, &b) in from.iter().zip(to) {
            self.circuit.push(Gate::cx(a, b))?;
        }
        Ok(())
    }

    /// Phases 2 and 3: binary weight to one-hot to unary, then the local Dicke unitary.
    fn finish_local(&mut self, local: &Local) -> Result<()> {
        if local.cap == 0 {
            return Ok(());
        }
        let onehot = Register::one_hot(local.onehot.clone())?;
        self.add(binary_to_onehot(local.cap, &Register::binary(local.reg.clone())?, &onehot))?;
        self.add(onehot_to_unary(local.cap, &onehot))?;
        self.add(dicke_unitary(local.data.len(), local.cap, &local.data))
    }
}

fn start(spec: &DickeSpec, ancillas: usize) -> Result<(Assembly, Partition, Vec<Local>)> {
    let partition = balanced_partition(spec.n, spec.p, ancillas)?;
    let width = spec.register_width();
    let mut circuit = Circuit::new(partition.n_qubits());
    let mut locals = Vec::with_capacity(spec.p);
    for (i, (range, cap)) in data_ranges(spec.n, spec.p)?.into_iter().zip(spec.k_prime()).enumerate() {
        let anc = spec.n + i * ancillas..spec.n + (i + 1) * ancillas;
        for q in range.clone() {
            circuit.set_label(q, QubitRole::Data)?;
        }
        for (t, q) in anc.clone().enumerate() {
            let role = match t {
                0 => QubitRole::OneHotRegister,
                1 => QubitRole::BinaryRegister,
                _ => QubitRole::Ancilla,
            };
            circuit.set_label(q, role)?;
        }
        locals.push(Local::new(range, anc, cap, width));
    }
    Ok((Assembly { circuit }, partition, locals))
}

/// Two-QPU construction with `ceil(log2(k + 1))` communication gates.
///
/// QPU 0 prepares its weight `j` in binary, copies it across, and QPU 1 turns
/// the copy into `k - j`; each side then expands its weight into a local
/// Dicke state. For `k > n/2` the complement `D(n, n - k)` is built and
/// every data qubit flipped.
pub fn build_2qpu(spec: &DickeSpec) -> Result<Build> {
    spec.check()?;
    if spec.p != 2 {
        return Err(Error::Argument(format!("two-QPU builder called with p = {}", spec.p)));
    }
    let flip = spec.k > spec.n / 2;
    let inner = DickeSpec { k: if flip { spec.n - spec.k } else { spec.k }, ..*spec };
    let (mut asm, partition, locals) = start(&inner, 2)?;
    let m = inner.register_width();
    if m > 0 {
        let alpha = dicke_amplitudes_2qpu(inner.n, inner.k)?;
        asm.add(qsp_real(&alpha, &locals[0].reg))?;
        asm.copy(&locals[0].reg, &locals[1].reg)?;
        asm.add(map_to_k_minus_j(&locals[1].reg, inner.k as u64, locals[1].spare(m)?))?;
        for local in &locals {
            asm.finish_local(local)?;
        }
    }
    if flip {
        for q in 0..spec.n {
            asm.circuit.push(Gate::x(q))?;
        }
    }
    Ok(Build { spec: *spec, circuit: asm.circuit, partition, ancillas_per_qpu: 2 })
}

/// Ancillas each QPU needs so a middle QPU can hold both its weight register
/// and the incoming partial sum.
pub fn pqpu_ancillas(spec: &DickeSpec) -> usize {
    let m = spec.register_width();
    let smallest = spec.block_sizes().into_iter().skip(1).min().unwrap_or(0);
    2usize.max((2 * m).saturating_sub(smallest))
}

/// General p-QPU construction with `2 (p - 1) ceil(log2(k + 1))`
/// communication gates.
///
/// Partial sums `J_i = j_0 + ... + j_i` travel down the QPU chain; QPU `i`
/// samples `j_i` conditioned on `J_{i-1}` alone, the last QPU takes
/// `k - J_{p-2}`, and the chain is then unwound to clear every copy.
pub fn build_pqpu(spec: &DickeSpec) -> Result<Build> {
    spec.check()?;
    if spec.p < 2 {
        return Err(Error::Argument(format!("p-QPU builder needs p >= 2, got {}", spec.p)));
    }
    let (p, k, m) = (spec.p, spec.k, spec.register_width());
    let ancillas = pqpu_ancillas(spec);
    let (mut asm, partition, locals) = start(spec, ancillas)?;
    if m > 0 {
        let tables = stage_tables(spec);
        let copies: Vec<&[Qubit]> =
            locals.iter().map(|l| l.spare(m)).collect::<Result<Vec<_>>>().map(|v| {
                // QPU 0 never receives a copy.
                v.into_iter().enumerate().map(|(i, s)| if i == 0 { &[][..] } else { s }).collect()
            })?;
        asm.add(qsp_real(&tables[0][&0], &locals[0].reg))?;
        asm.copy(&locals[0].reg, copies[1])?;
        for i in 1..p - 1 {
            asm.add(cqsp_real(&tables[i], copies[i], &locals[i].reg))?;
            asm.add(ripple_add(&locals[i].reg, copies[i], None))?;
            asm.copy(copies[i], copies[i + 1])?;
        }
        asm.add(load_k_minus(copies[p - 1], &locals[p - 1].reg, k as u64))?;
        for i in (1..p - 1).rev() {
            asm.copy(copies[i], copies[i + 1])?;
            asm.add(subtract(&locals[i].reg, copies[i]))?;
        }
        asm.copy(&locals[0].reg, copies[1])?;
        for local in &locals {
            asm.finish_local(local)?;
        }
    }
    Ok(Build { spec: *spec, circuit: asm.circuit, partition, ancillas_per_qpu: ancillas })
}

/// Single-QPU preparation: unary input followed by the Dicke unitary.
pub fn build_local(spec: &DickeSpec) -> Result<Build> {
    spec.check()?;
    if spec.p != 1 {
        return Err(Error::Argument(format!("local builder called with p = {}", spec.p)));
    }
    let data: Vec<Qubit> = (0..spec.n).collect();
    let mut circuit = Circuit::new(spec.n);
    for &q in &data {
        circuit.set_label(q, QubitRole::Data)?;
    }
    for &q in &data[..spec.k] {
        circuit.push(Gate::x(q))?;
    }
    circuit.extend(&dicke_unitary(spec.n, spec.k, &data)?)?;
    Ok(Build { spec: *spec, circuit, partition: balanced_partition(spec.n, 1, 0)?, ancillas_per_qpu: 0 })
}

/// Picks the construction for `spec.p`: local, two-QPU, or the QPU chain.
pub fn build(spec: &DickeSpec) -> Result<Build> {
    match spec.p {
        1 => build_local(spec),
        2 => build_2qpu(spec),
        _ => build_pqpu(spec),
    }
}

/// Communication gates the constructions use.
pub fn expected_communication(spec: &DickeSpec, chain: bool) -> usize {
    let m = ceil_log2(spec.k as u64 + 1);
    match spec.p {
        1 => 0,
        2 if !chain => {
            let k = if spec.k > spec.n / 2 { spec.n - spec.k } else { spec.k };
            ceil_log2(k as u64 + 1)
        }
        p => 2 * (p - 1) * m,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Dense,
    Sparse,
}

/// Simulation outcome of a build started from `|0...0>`.
#[derive(Debug, Clone, PartialEq)]
pub struct Verification {
    /// `|<D(n,k) (x) 0|psi>|^2`.
    pub fidelity: f64,
    /// Probability of any ancilla reading 1.
    pub leakage: f64,
    /// Weight distribution of each QPU's data block.
    pub block_marginals: Vec<Vec<f64>>,
    pub engine: Engine,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.fidelity >= 1.0 - FIDELITY_TOL && self.leakage <= LEAKAGE_TOL
    }
}

/// Simulates the decomposed circuit: densely up to [`DENSE_VERIFY_QUBITS`],
/// sparsely beyond.
pub fn verify(build: &Build) -> Result<Verification> {
    let circuit = build.circuit.decompose();
    let n = build.spec.n;
    let ranges = data_ranges(n, build.spec.p)?;
    let mut marginals: Vec<Vec<f64>> = ranges.iter().map(|r| vec![0.0; r.len() + 1]).collect();
    let data_mask = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
    let (mut overlap, mut leakage) = (num_complex::Complex64::new(0.0, 0.0), 0.0);
    let mut visit = |x: u64, a: num_complex::Complex64| {
        let w = a.norm_sqr();
        if x & !data_mask != 0 {
            leakage += w;
        } else if x.count_ones() as usize == build.spec.k {
            overlap += a;
        }
        for (r, probs) in ranges.iter().zip(marginals.iter_mut()) {
            let block = (x >> r.start) & ((1u64 << r.len()) - 1);
            probs[block.count_ones() as usize] += w;
        }
    };
    let engine = if circuit.n_qubits() <= DENSE_VERIFY_QUBITS {
        let state = run(&circuit, None)?;
        state.amplitudes().iter().enumerate().for_each(|(x, &a)| visit(x as u64, a));
        Engine::Dense
    } else {
        run_sparse(&circuit, None)?.iter().for_each(|(x, a)| visit(x, a));
        Engine::Sparse
    };
    let count = binomial(n as u32, build.spec.k as u32) as f64;
    Ok(Verification {
        fidelity: (overlap.norm_sqr() / count).min(1.0),
        leakage,
        block_marginals: marginals,
        engine,
    })
}

/// Data-qubit state of a dense run, for callers that want the amplitudes.
pub fn data_state(build: &Build) -> Result<StateVector> {
    let state = run(&build.circuit, None)?;
    let data: Vec<Qubit> = build.data_qubits().collect();
    let amps = state.amplitudes()[..1 << data.len()].to_vec();
    let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    let scale = 1.0 / libm::sqrt(norm);
    StateVector::from_amplitudes(data.len(), amps.into_iter().map(|a| a * scale).collect())
}
