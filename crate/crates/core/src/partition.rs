//! Qubit-to-QPU partitions and the communication-complexity metric.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::circuit::{Circuit, Gate, Qubit};
use crate::error::{Error, Result};

/// Assignment of every qubit index to one of `p` QPUs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    p: usize,
    assignment: Vec<usize>,
}

/// Outcome of the balancedness check under both readings of the size band.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Balance {
    /// Every block has `floor(N/p)` or `ceil(N/p)` qubits.
    pub strict: bool,
    /// Every block has `floor(N/p)` or `ceil(N/p) + 1` qubits.
    pub literal: bool,
}

impl Partition {
    pub fn new(p: usize, assignment: Vec<usize>) -> Result<Self> {
        if p == 0 {
            return Err(Error::Argument("partition needs at least one QPU".into()));
        }
        if let Some((q, &qpu)) = assignment.iter().enumerate().find(|(_, &a)| a >= p) {
            return Err(Error::Argument(format!("qubit {q} assigned to QPU {qpu} >= {p}")));
        }
        Ok(Partition { p, assignment })
    }

    pub fn n_qubits(&self) -> usize {
        self.assignment.len()
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn qpu_of(&self, qubit: Qubit) -> usize {
        self.assignment[qubit]
    }

    pub fn qubits_of(&self, qpu: usize) -> Vec<Qubit> {
        (0..self.assignment.len()).filter(|&q| self.assignment[q] == qpu).collect()
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.p];
        for &a in &self.assignment {
            sizes[a] += 1;
        }
        sizes
    }

    pub fn balance(&self) -> Balance {
        let n = self.assignment.len();
        let lo = n / self.p;
        let hi = n.div_ceil(self.p);
        let sizes = self.block_sizes();
        Balance {
            strict: sizes.iter().all(|&s| s == lo || s == hi),
            literal: sizes.iter().all(|&s| s == lo || s == hi + 1),
        }
    }

    /// True when `gate` is a two-qubit gate whose operands sit on different QPUs.
    pub fn is_cross(&self, gate: &Gate) -> bool {
        match gate.qubits() {
            [a, b] => self.assignment[*a] != self.assignment[*b],
            _ => false,
        }
    }

    pub(crate) fn check_covers(&self, n_qubits: usize) -> Result<()> {
        if self.assignment.len() == n_qubits {
            Ok(())
        } else {
            Err(Error::Shape(format!(
                "partition covers {} qubits, circuit has {n_qubits}",
                self.assignment.len()
            )))
        }
    }
}

/// Data block sizes for `n_data` qubits on `p` QPUs: the first `n_data % p`
/// blocks get `ceil(n_data / p)` qubits, the rest `floor(n_data / p)`.
pub fn block_sizes(n_data: usize, p: usize) -> Result<Vec<usize>> {
    if p == 0 || n_data == 0 {
        return Err(Error::Argument(format!("need n_data > 0 and p > 0, got n_data={n_data}, p={p}")));
    }
    if p > n_data {
        return Err(Error::Argument(format!("{p} QPUs cannot each hold one of {n_data} data qubits")));
    }
    let (base, extra) = (n_data / p, n_data % p);
    Ok((0..p).map(|i| base + usize::from(i < extra)).collect())
}

/// Contiguous data ranges matching [`block_sizes`].
pub fn data_ranges(n_data: usize, p: usize) -> Result<Vec<Range<usize>>> {
    let mut start = 0;
    Ok(block_sizes(n_data, p)?
        .into_iter()
        .map(|s| {
            let r = start..start + s;
            start += s;
            r
        })
        .collect())
}

/// Partition with contiguous data blocks followed by per-QPU ancillas.
///
/// Qubits `0..n_data` are data; QPU `i` owns its contiguous data range plus
/// ancillas `n_data + i * ancillas_per_qpu ..` (`ancillas_per_qpu` of them).
pub fn balanced_partition(n_data: usize, p: usize, ancillas_per_qpu: usize) -> Result<Partition> {
    let mut assignment = Vec::with_capacity(n_data + p * ancillas_per_qpu);
    for (qpu, size) in block_sizes(n_data, p)?.into_iter().enumerate() {
        assignment.extend(core::iter::repeat_n(qpu, size));
    }
    for qpu in 0..p {
        assignment.extend(core::iter::repeat_n(qpu, ancillas_per_qpu));
    }
    Partition::new(p, assignment)
}

/// Number of two-qubit gates whose operands lie on different QPUs.
pub fn communication_complexity(circuit: &Circuit, partition: &Partition) -> Result<usize> {
    partition.check_covers(circuit.n_qubits())?;
    if let Some(g) = circuit.gates().iter().find(|g| g.kind().is_macro()) {
        return Err(Error::MacroInMetric(g.kind().name()));
    }
    Ok(circuit.gates().iter().filter(|g| partition.is_cross(g)).count())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QpuUsage {
    pub qpu: usize,
    /// Peak number of qubits holding live state at the same time.
    pub peak: usize,
    pub budget: usize,
}

impl QpuUsage {
    pub fn overage(&self) -> usize {
        self.peak.saturating_sub(self.budget)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalityReport {
    pub per_qpu: Vec<QpuUsage>,
}

impl LocalityReport {
    pub fn passed(&self) -> bool {
        self.per_qpu.iter().all(|u| u.overage() == 0)
    }

    pub fn failures(&self) -> impl Iterator<Item = &QpuUsage> {
        self.per_qpu.iter().filter(|u| u.overage() > 0)
    }
}

/// Peak per-QPU qubit usage against `budget_per_qpu`.
///
/// A qubit counts as live from the first gate touching it through the last.
pub fn validate_locality(circuit: &Circuit, partition: &Partition, budget_per_qpu: usize) -> LocalityReport {
    let n = circuit.n_qubits().min(partition.n_qubits());
    let mut first = vec![usize::MAX; n];
    let mut last = vec![0usize; n];
    for (t, gate) in circuit.gates().iter().enumerate() {
        for &q in gate.qubits() {
            if q < n {
                first[q] = first[q].min(t);
                last[q] = t;
            }
        }
    }
    let per_qpu = (0..partition.p())
        .map(|qpu| {
            // +1 at first use, -1 after last use; sweep in time order.
            let mut events: Vec<(usize, i32)> = Vec::new();
            for q in (0..n).filter(|&q| partition.qpu_of(q) == qpu && first[q] != usize::MAX) {
                events.push((first[q], 1));
                events.push((last[q] + 1, -1));
            }
            events.sort_by_key(|&(t, d)| (t, d));
            let (mut live, mut peak) = (0i32, 0i32);
            for (_, d) in events {
                live += d;
                peak = peak.max(live);
            }
            QpuUsage { qpu, peak: peak as usize, budget: budget_per_qpu }
        })
        .collect();
    LocalityReport { per_qpu }
}
