//! Real-amplitude state preparation by multiplexed Y rotations.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::multiplex::uniformly_controlled_ry;
use super::{check_distinct, finish};
use crate::circuit::{ry_angle, Circuit, Gate, Qubit};
use crate::error::{Error, Result};

/// Allowed drift of the squared norm of an amplitude table.
pub const NORM_TOL: f64 = 1e-12;

fn check_row(amps: &[f64], width: usize) -> Result<()> {
    if width < usize::BITS as usize && amps.len() > 1 << width {
        return Err(Error::Capacity { needed: crate::binom::ceil_log2(amps.len() as u64), available: width });
    }
    if let Some((index, &value)) = amps.iter().enumerate().find(|(_, &a)| a < 0.0 || a.is_nan()) {
        return Err(Error::NegativeAmplitude { index, value });
    }
    let norm: f64 = amps.iter().map(|a| a * a).sum();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::Normalization(norm));
    }
    Ok(())
}

/// `|0...0> -> sum_x amps[x] |x>` on `reg` (reg[0] least significant).
pub fn qsp_real(amps: &[f64], reg: &[Qubit]) -> Result<Circuit> {
    check_row(amps, reg.len())?;
    check_distinct("qsp", &[reg])?;
    let gates = prepare(&[], reg, |_| Some(amps));
    finish(&[reg], gates)
}

/// `|i>|0> -> |i>|psi_i>` for every control value `i` with a table row;
/// absent rows leave the target untouched.
pub fn cqsp_real(tables: &BTreeMap<usize, Vec<f64>>, ctrl: &[Qubit], tgt: &[Qubit]) -> Result<Circuit> {
    for (&i, row) in tables {
        if ctrl.len() < usize::BITS as usize && i >> ctrl.len() != 0 {
            return Err(Error::Domain(alloc::format!("control value {i} needs more than {} bits", ctrl.len())));
        }
        check_row(row, tgt.len())?;
    }
    check_distinct("cqsp", &[ctrl, tgt])?;
    let gates = prepare(ctrl, tgt, |i| tables.get(&i).map(Vec::as_slice));
    finish(&[ctrl, tgt], gates)
}

/// Prepares target bits from the most significant down; the rotation on bit
/// `b` is multiplexed over the control register and the target bits above `b`.
fn prepare<'a>(ctrl: &[Qubit], tgt: &[Qubit], row: impl Fn(usize) -> Option<&'a [f64]>) -> Vec<Gate> {
    let (c, m) = (ctrl.len(), tgt.len());
    let mut gates = Vec::new();
    for b in (0..m).rev() {
        let prefix_bits = m - 1 - b;
        let mut controls: Vec<Qubit> = ctrl.to_vec();
        controls.extend_from_slice(&tgt[b + 1..]);
        let mut angles = vec![0.0; 1 << (c + prefix_bits)];
        for (s, angle) in angles.iter_mut().enumerate() {
            let Some(amps) = row(s & ((1 << c) - 1)) else { continue };
            let prefix = s >> c;
            let (mut p0, mut p1) = (0.0, 0.0);
            for (x, a) in amps.iter().enumerate().filter(|(x, _)| x >> (b + 1) == prefix) {
                if x >> b & 1 == 0 {
                    p0 += a * a;
                } else {
                    p1 += a * a;
                }
            }
            *angle = ry_angle(p0, p1);
        }
        gates.extend(uniformly_controlled_ry(&controls, tgt[b], &angles));
    }
    gates
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::binom::binomial;
    use crate::sim::{run, StateVector};

    fn probs(circ: &Circuit, input: usize, n: usize) -> Vec<f64> {
        let out = run(circ, Some(&StateVector::basis(n, input).unwrap())).unwrap();
        out.amplitudes().iter().map(|a| a.norm_sqr()).collect()
    }

    #[test]
    fn trivial_table_is_identity() {
        assert!(qsp_real(&[1.0], &[]).unwrap().is_empty());
        assert!(qsp_real(&[1.0, 0.0], &[0]).unwrap().is_empty());
    }

    #[test]
    fn hadamard_like() {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let circ = qsp_real(&[h, h], &[0]).unwrap();
        let out = run(&circ, None).unwrap();
        assert!((out.amplitude(0).re - h).abs() < 1e-12);
        assert!((out.amplitude(1).re - h).abs() < 1e-12);
    }

    #[test]
    fn dicke_weight_table() {
        // Oracle: C(2,j) C(2,2-j) / C(4,2).
        let want: Vec<f64> = (0..4u32)
            .map(|j| if j > 2 { 0.0 } else { (binomial(2, j) * binomial(2, 2 - j)) as f64 / 6.0 })
            .collect();
        let amps: Vec<f64> = want[..3].iter().map(|p| libm::sqrt(*p)).collect();
        let circ = qsp_real(&amps, &[0, 1]).unwrap();
        let got = probs(&circ, 0, 2);
        let l1: f64 = got.iter().zip(&want).map(|(a, b)| (a - b).abs()).sum();
        assert!(l1 < 1e-10, "{got:?}");
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(matches!(qsp_real(&[0.5, 0.5], &[0]), Err(Error::Normalization(_))));
        assert!(matches!(qsp_real(&[-1.0], &[0]), Err(Error::NegativeAmplitude { .. })));
        assert!(matches!(qsp_real(&[0.5; 4], &[0]), Err(Error::Capacity { .. })));
    }

    #[test]
    fn controlled_rows_act_like_cnot_on_basis() {
        let tables = BTreeMap::from([(0, vec![1.0, 0.0]), (1, vec![0.0, 1.0])]);
        let circ = cqsp_real(&tables, &[0], &[1]).unwrap();
        for (input, output) in [(0b00, 0b00), (0b01, 0b11)] {
            let p = probs(&circ, input, 2);
            assert!((p[output] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn single_identity_row() {
        let tables = BTreeMap::from([(0, vec![1.0, 0.0, 0.0])]);
        assert!(cqsp_real(&tables, &[0], &[1, 2]).unwrap().is_empty());
    }

    #[test]
    fn absent_rows_are_identity() {
        let s = libm::sqrt(0.5);
        let tables = BTreeMap::from([(2, vec![s, 0.0, s])]);
        let circ = cqsp_real(&tables, &[0, 1], &[2, 3]).unwrap();
        for i in [0usize, 1, 3] {
            assert!((probs(&circ, i, 4)[i] - 1.0).abs() < 1e-12);
        }
        let p = probs(&circ, 2, 4);
        assert!((p[2] - 0.5).abs() < 1e-12 && (p[2 | 0b1000] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn unnormalized_row_rejected() {
        let tables = BTreeMap::from([(0, vec![1.0, 1.0])]);
        assert!(matches!(cqsp_real(&tables, &[0], &[1]), Err(Error::Normalization(_))));
    }
}
