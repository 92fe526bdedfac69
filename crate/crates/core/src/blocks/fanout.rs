use alloc::vec::Vec;

use super::{check_distinct, finish};
use crate::circuit::{copy_tree_rounds, Circuit, Gate, Qubit};
use crate::error::Result;

/// Copies `control` onto zero-initialized `targets` with a balanced CNOT
/// tree: `targets.len()` CNOTs in `ceil(log2(m + 1))` layers.
pub fn fan_out(control: Qubit, targets: &[Qubit]) -> Result<Circuit> {
    check_distinct("fanout", &[&[control], targets])?;
    let gates: Vec<Gate> = copy_tree_rounds(control, targets)
        .into_iter()
        .flatten()
        .map(|(p, c)| Gate::cx(p, c))
        .collect();
    finish(&[&[control], targets], gates)
}
