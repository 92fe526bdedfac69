use alloc::vec::Vec;

use crate::circuit::{Gate, Qubit};

/// Uniformly controlled Y rotation: for control value `s` (with
/// `controls[0]` as the least significant bit) apply `Ry(angles[s])` to
/// `target`. Lowered recursively on the most significant control into
/// `Ry` and CNOT gates; all-zero halves are skipped.
pub fn uniformly_controlled_ry(controls: &[Qubit], target: Qubit, angles: &[f64]) -> Vec<Gate> {
    assert_eq!(angles.len(), 1 << controls.len(), "one angle per control value");
    let mut out = Vec::new();
    emit(controls, target, angles, &mut out);
    out
}

fn emit(controls: &[Qubit], target: Qubit, angles: &[f64], out: &mut Vec<Gate>) {
    if angles.iter().all(|&a| a == 0.0) {
        return;
    }
    let Some((&msb, rest)) = controls.split_last() else {
        out.push(Gate::ry(angles[0], target));
        return;
    };
    // Ry(a) then CX Ry(b) CX gives Ry(a + b) when msb = 0 and Ry(a - b) when msb = 1.
    let half = angles.len() / 2;
    let (low, high) = angles.split_at(half);
    let sum: Vec<f64> = low.iter().zip(high).map(|(x, y)| (x + y) / 2.0).collect();
    let diff: Vec<f64> = low.iter().zip(high).map(|(x, y)| (x - y) / 2.0).collect();
    emit(rest, target, &sum, out);
    if diff.iter().any(|&d| d != 0.0) {
        out.push(Gate::cx(msb, target));
        emit(rest, target, &diff, out);
        out.push(Gate::cx(msb, target));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Circuit;
    use crate::sim::{run, StateVector};

    #[test]
    fn each_control_value_gets_its_angle() {
        let angles = [0.1, -0.7, 1.3, 2.9, 0.0, 0.4, -1.1, 3.0];
        let controls = [0, 1, 2];
        let mut circ = Circuit::new(4);
        for g in uniformly_controlled_ry(&controls, 3, &angles) {
            circ.push(g).unwrap();
        }
        for (s, &theta) in angles.iter().enumerate() {
            let out = run(&circ, Some(&StateVector::basis(4, s).unwrap())).unwrap();
            let (c, si) = (libm::cos(theta / 2.0), libm::sin(theta / 2.0));
            assert!((out.amplitude(s).re - c).abs() < 1e-12, "s = {s}");
            assert!((out.amplitude(s | 8).re - si).abs() < 1e-12, "s = {s}");
        }
    }

    #[test]
    fn all_zero_is_empty() {
        assert!(uniformly_controlled_ry(&[0, 1], 2, &[0.0; 4]).is_empty());
    }
}
