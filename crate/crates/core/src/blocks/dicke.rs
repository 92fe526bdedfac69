use alloc::format;
use alloc::vec::Vec;

use super::multiplex::uniformly_controlled_ry;
use super::{check_distinct, finish};
use crate::circuit::{Circuit, Gate, Qubit};
use crate::error::{Error, Result};

/// Dicke unitary on `reg`: maps the unary input with the lowest `j` qubits
/// set to `D(n, j)` for every `j <= k`.
///
/// Built from split-and-cyclic-shift stages `l = n, ..., 2`, each moving one
/// excitation down with amplitude `sqrt(m / l)`. Size `O(nk)`, depth `O(n)`.
pub fn dicke_unitary(n: usize, k: usize, reg: &[Qubit]) -> Result<Circuit> {
    if k > n {
        return Err(Error::Argument(format!("k = {k} exceeds n = {n}")));
    }
    if reg.len() != n {
        return Err(Error::Shape(format!("register holds {} qubits, expected {n}", reg.len())));
    }
    check_distinct("dicke_unitary", &[reg])?;
    // Wire t (1-based, left to right) is the register's (n - t)-th qubit.
    let q = |t: usize| reg[n - t];
    let mut g = Vec::new();
    if k > 0 {
        for l in (2..=n).rev() {
            let lf = l as f64;
            let theta = 2.0 * libm::acos(libm::sqrt(1.0 / lf));
            g.push(Gate::cx(q(l - 1), q(l)));
            g.extend(uniformly_controlled_ry(&[q(l)], q(l - 1), &[0.0, theta]));
            g.push(Gate::cx(q(l - 1), q(l)));
            for m in 2..=k.min(l - 1) {
                let theta = 2.0 * libm::acos(libm::sqrt(m as f64 / lf));
                g.push(Gate::cx(q(l - m), q(l)));
                g.extend(uniformly_controlled_ry(&[q(l), q(l - m + 1)], q(l - m), &[0.0, 0.0, 0.0, theta]));
                g.push(Gate::cx(q(l - m), q(l)));
            }
        }
    }
    finish(&[reg], g)
}
