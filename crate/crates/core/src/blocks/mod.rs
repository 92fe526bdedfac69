//! Reusable subcircuit constructors.
//!
//! Every constructor returns a [`Circuit`] sized to the largest qubit index it
//! touches; callers splice blocks into a wider register with
//! [`Circuit::extend`].

mod arith;
mod dicke;
mod encoding;
mod fanout;
mod multiplex;
mod qsp;

use alloc::format;
use alloc::vec::Vec;
use core::ops::Deref;

pub use arith::{add_constant, load_k_minus, map_to_k_minus_j, ripple_add, subtract};
pub use dicke::dicke_unitary;
pub use encoding::{binary_to_onehot, onehot_position_of_bit, onehot_to_unary};
pub use fanout::fan_out;
pub use multiplex::uniformly_controlled_ry;
pub use qsp::{cqsp_real, qsp_real, NORM_TOL};

use crate::binom::bit_width;
use crate::circuit::{Circuit, Gate, Qubit};
use crate::error::{Error, Result};

/// How a register encodes its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Encoding {
    /// `ceil(log2(max + 1))` qubits, least significant first.
    Binary,
    /// `max + 1` qubits, exactly one set.
    OneHot,
    /// `max` qubits, the lowest `j` set.
    Unary,
    /// Data qubits with no fixed encoding.
    Data,
}

impl Encoding {
    /// Qubits needed to hold every value in `0..=max`.
    pub fn width(self, max: usize) -> usize {
        match self {
            Encoding::Binary => bit_width(max as u64),
            Encoding::OneHot => max + 1,
            Encoding::Unary | Encoding::Data => max,
        }
    }
}

/// Ordered qubit indices of one logical register, least significant first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Register {
    encoding: Encoding,
    qubits: Vec<Qubit>,
}

impl Register {
    pub fn new(encoding: Encoding, qubits: Vec<Qubit>) -> Result<Self> {
        check_distinct("register", &[&qubits])?;
        Ok(Register { encoding, qubits })
    }

    pub fn binary(qubits: Vec<Qubit>) -> Result<Self> {
        Self::new(Encoding::Binary, qubits)
    }

    pub fn one_hot(qubits: Vec<Qubit>) -> Result<Self> {
        Self::new(Encoding::OneHot, qubits)
    }

    pub fn unary(qubits: Vec<Qubit>) -> Result<Self> {
        Self::new(Encoding::Unary, qubits)
    }

    pub fn data(qubits: Vec<Qubit>) -> Result<Self> {
        Self::new(Encoding::Data, qubits)
    }

    pub fn encoding(&self) -> Encoding {
        self.encoding
    }

    /// Largest value this register can hold under its encoding.
    pub fn capacity(&self) -> usize {
        let w = self.qubits.len();
        match self.encoding {
            Encoding::Binary => (1usize << w) - 1,
            Encoding::OneHot => w.saturating_sub(1),
            Encoding::Unary | Encoding::Data => w,
        }
    }
}

impl Deref for Register {
    type Target = [Qubit];

    fn deref(&self) -> &[Qubit] {
        &self.qubits
    }
}

/// Fails when any qubit appears twice across `groups`.
pub(crate) fn check_distinct(gate: &'static str, groups: &[&[Qubit]]) -> Result<()> {
    let mut seen: Vec<Qubit> = Vec::new();
    for &q in groups.iter().flat_map(|g| g.iter()) {
        if seen.contains(&q) {
            return Err(Error::Operand { gate, reason: format!("qubit {q} used twice") });
        }
        seen.push(q);
    }
    Ok(())
}

/// Wraps `gates` in a circuit wide enough for `gates` and every qubit in `span`.
pub(crate) fn finish(span: &[&[Qubit]], gates: Vec<Gate>) -> Result<Circuit> {
    let width = span
        .iter()
        .flat_map(|g| g.iter())
        .chain(gates.iter().flat_map(|g| g.qubits()))
        .map(|&q| q + 1)
        .max()
        .unwrap_or(0);
    let mut c = Circuit::new(width);
    for g in gates {
        c.push(g)?;
    }
    Ok(c)
}
