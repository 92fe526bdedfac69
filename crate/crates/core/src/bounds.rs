//! Rank-based lower bounds on communication complexity.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::binom::ceil_log2;
use crate::circuit::Qubit;
use crate::error::{Error, Result};
use crate::partition::{balanced_partition, Partition};
use crate::sim::StateVector;

/// Singular values below this fraction of the largest are treated as zero.
pub const RANK_RTOL: f64 = 1e-9;

/// Amplitudes of a state reshaped into one mode per QPU.
///
/// Mode `j` indexes the local basis of QPU `j`, whose qubits are taken in
/// ascending order with the first as the least significant bit. Entries are
/// stored with mode 0 varying slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct StateTensor {
    modes: Vec<Vec<Qubit>>,
    entries: Vec<Complex64>,
}

impl StateTensor {
    pub fn order(&self) -> usize {
        self.modes.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.modes.iter().map(|m| 1 << m.len()).collect()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, index: &[usize]) -> Complex64 {
        let dims = self.dims();
        assert_eq!(index.len(), dims.len(), "one index per mode");
        let flat = index.iter().zip(&dims).fold(0, |acc, (&i, &d)| {
            assert!(i < d, "index {i} out of range {d}");
            acc * d + i
        });
        self.entries[flat]
    }

    /// Matrix with mode `mode` as rows and all other modes (in order) as columns.
    pub fn flatten(&self, mode: usize) -> DMatrix<Complex64> {
        let dims = self.dims();
        let rows = dims[mode];
        let cols = self.entries.len() / rows;
        let inner: usize = dims[mode + 1..].iter().product();
        DMatrix::from_fn(rows, cols, |r, c| {
            // Column index enumerates (before, after) with `after` fastest.
            let (before, after) = (c / inner, c % inner);
            self.entries[(before * rows + r) * inner + after]
        })
    }
}

/// Reshapes `state` along `partition`.
pub fn state_tensor(state: &StateVector, partition: &Partition) -> Result<StateTensor> {
    if partition.n_qubits() != state.n_qubits() {
        return Err(Error::Shape(format!(
            "partition covers {} qubits, state has {}",
            partition.n_qubits(),
            state.n_qubits()
        )));
    }
    let modes: Vec<Vec<Qubit>> = (0..partition.p()).map(|j| partition.qubits_of(j)).collect();
    let dims: Vec<usize> = modes.iter().map(|m| 1usize << m.len()).collect();
    let mut entries = vec![Complex64::new(0.0, 0.0); state.amplitudes().len()];
    for (x, &a) in state.amplitudes().iter().enumerate() {
        let flat = modes.iter().zip(&dims).fold(0, |acc, (qs, &d)| {
            let local = qs.iter().enumerate().fold(0, |l, (t, &q)| l | ((x >> q) & 1) << t);
            acc * d + local
        });
        entries[flat] = a;
    }
    Ok(StateTensor { modes, entries })
}

/// Numerical rank by singular values with relative cutoff [`RANK_RTOL`].
pub fn numerical_rank(m: &DMatrix<Complex64>) -> usize {
    let singular = if m.iter().all(|z| z.im == 0.0) {
        m.map(|z| z.re).svd(false, false).singular_values
    } else {
        m.clone().svd(false, false).singular_values
    };
    let top = singular.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return 0;
    }
    singular.iter().filter(|&&s| s > RANK_RTOL * top).count()
}

/// Rank of the matrix of a two-mode tensor.
pub fn matrix_rank(tensor: &StateTensor) -> Result<usize> {
    if tensor.order() != 2 {
        return Err(Error::Argument(format!("matrix rank needs 2 modes, got {}", tensor.order())));
    }
    Ok(numerical_rank(&tensor.flatten(0)))
}

/// Rank of every single-mode flattening.
pub fn flattening_ranks(tensor: &StateTensor) -> Vec<usize> {
    (0..tensor.order()).map(|j| numerical_rank(&tensor.flatten(j))).collect()
}

/// Exact rank of the 0/1 nonzero pattern of a two-mode tensor, by
/// fraction-free elimination over the integers.
pub fn support_rank_exact(tensor: &StateTensor) -> Result<usize> {
    if tensor.order() != 2 {
        return Err(Error::Argument(format!("support rank needs 2 modes, got {}", tensor.order())));
    }
    let m = tensor.flatten(0);
    let mut a: Vec<Vec<BigInt>> = (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| if m[(r, c)].norm() > 0.0 { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    Ok(bareiss_rank(&mut a))
}

fn bareiss_rank(a: &mut [Vec<BigInt>]) -> usize {
    let (rows, cols) = (a.len(), a.first().map_or(0, Vec::len));
    let mut prev = BigInt::one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(rank, pivot);
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let v = (&a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c]) / &prev;
                a[r][c] = v;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

/// `rank(M_{D(n,k)})` for a balanced two-way split holding at least `k`
/// qubits per side.
pub fn dicke_rank_formula(k: usize) -> usize {
    k + 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    /// `ceil(log2 rank)` of the two-way state matrix.
    MatrixRank,
    /// `ceil(log2)` of the largest single-mode flattening rank; bounds the
    /// tensor rank from below, so it is weaker than the tensor-rank bound.
    Flattening,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LowerBound {
    pub bound: usize,
    /// Rank achieving the minimum (the largest flattening rank for `p >= 3`).
    pub rank: usize,
    pub kind: BoundKind,
    /// Partitions examined: the contiguous one plus the sampled ones.
    pub partitions: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundOptions {
    /// Random balanced partitions to try beyond the contiguous one.
    pub samples: usize,
    pub seed: u64,
}

impl Default for BoundOptions {
    fn default() -> Self {
        BoundOptions { samples: 3, seed: 0 }
    }
}

/// Same block sizes as the contiguous split, on a shuffled qubit order.
fn shuffled_partition(template: &Partition, rng: &mut ChaCha8Rng) -> Result<Partition> {
    let mut order: Vec<Qubit> = (0..template.n_qubits()).collect();
    order.shuffle(rng);
    let mut assignment = vec![0; order.len()];
    for (slot, &q) in order.iter().enumerate() {
        assignment[q] = template.qpu_of(slot);
    }
    Partition::new(template.p(), assignment)
}

/// Communication lower bound for preparing `state` on `p` balanced QPUs,
/// minimized over the partitions examined.
pub fn cc_lower_bound(state: &StateVector, p: usize, options: BoundOptions) -> Result<LowerBound> {
    let contiguous = balanced_partition(state.n_qubits(), p, 0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut partitions = vec![contiguous.clone()];
    for _ in 0..options.samples {
        partitions.push(shuffled_partition(&contiguous, &mut rng)?);
    }
    let kind = if p == 2 { BoundKind::MatrixRank } else { BoundKind::Flattening };
    let mut best: Option<usize> = None;
    for part in &partitions {
        let tensor = state_tensor(state, part)?;
        let rank = match kind {
            BoundKind::MatrixRank => matrix_rank(&tensor)?,
            BoundKind::Flattening => flattening_ranks(&tensor).into_iter().max().unwrap_or(1),
        };
        best = Some(best.map_or(rank, |b| b.min(rank)));
    }
    let rank = best.unwrap_or(1);
    Ok(LowerBound { bound: ceil_log2(rank as u64), rank, kind, partitions: partitions.len() })
}
