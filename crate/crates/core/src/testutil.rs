//! Shared helpers for unit tests.

use crate::circuit::{Circuit, Qubit};
use crate::sim::{run_sparse, SparseState};

/// Packs register values into one basis index (register qubit 0 is the LSB).
pub fn pack(regs: &[(&[Qubit], u64)]) -> u64 {
    regs.iter().fold(0, |acc, (reg, v)| {
        reg.iter().enumerate().fold(acc, |acc, (i, &q)| acc | ((v >> i) & 1) << q)
    })
}

pub fn unpack(x: u64, reg: &[Qubit]) -> u64 {
    reg.iter().enumerate().fold(0, |acc, (i, &q)| acc | ((x >> q) & 1) << i)
}

/// Runs `circ` on basis state `input` both with macro semantics and after
/// decomposition, and returns the single output basis index.
pub fn basis_map(circ: &Circuit, input: u64) -> u64 {
    let mut outputs = [0u64; 2];
    for (slot, c) in [circ.clone(), circ.decompose()].iter().enumerate() {
        let start = SparseState::basis(c.n_qubits(), input).unwrap();
        let out = run_sparse(c, Some(&start)).unwrap();
        let hits: std::vec::Vec<_> = out.iter().filter(|(_, a)| a.norm() > 1e-9).collect();
        assert_eq!(hits.len(), 1, "output is not a basis state: {hits:?}");
        assert!((hits[0].1.re - 1.0).abs() < 1e-9 && hits[0].1.im.abs() < 1e-9, "phase {:?}", hits[0].1);
        outputs[slot] = hits[0].0;
    }
    assert_eq!(outputs[0], outputs[1], "macro and decomposed semantics differ");
    outputs[0]
}
