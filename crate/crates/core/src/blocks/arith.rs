//! Ripple-carry arithmetic on binary registers without extra ancillas.

use alloc::vec::Vec;

use super::{check_distinct, finish};
use crate::circuit::{Circuit, Gate, Qubit};
use crate::error::{Error, Result};

/// `|a>|b>|z> -> |a>|a + b mod 2^m>|z xor carry>` for equal-width `a`, `b`.
///
/// Ancilla-free ripple-carry adder: carries are threaded through `a` and
/// undone on the way back. Size and depth are linear in `m`.
pub fn ripple_add(a: &[Qubit], b: &[Qubit], carry_out: Option<Qubit>) -> Result<Circuit> {
    if a.len() != b.len() {
        return Err(Error::Shape(alloc::format!("adder widths {} and {}", a.len(), b.len())));
    }
    let carry: &[Qubit] = match &carry_out {
        Some(z) => core::slice::from_ref(z),
        None => &[],
    };
    check_distinct("adder", &[a, b, carry])?;
    let mut g = Vec::new();
    add_gates(a, b, carry_out, &mut g);
    finish(&[a, b, carry], g)
}

fn add_gates(a: &[Qubit], b: &[Qubit], z: Option<Qubit>, g: &mut Vec<Gate>) {
    let n = a.len();
    match n {
        0 => return,
        1 => {
            if let Some(z) = z {
                g.push(Gate::ccx(a[0], b[0], z));
            }
            g.push(Gate::cx(a[0], b[0]));
            return;
        }
        _ => {}
    }
    for i in 1..n {
        g.push(Gate::cx(a[i], b[i]));
    }
    if let Some(z) = z {
        g.push(Gate::cx(a[n - 1], z));
    }
    for i in (1..n - 1).rev() {
        g.push(Gate::cx(a[i], a[i + 1]));
    }
    for i in 0..n - 1 {
        g.push(Gate::ccx(b[i], a[i], a[i + 1]));
    }
    if let Some(z) = z {
        g.push(Gate::ccx(b[n - 1], a[n - 1], z));
    }
    for i in (1..n).rev() {
        g.push(Gate::cx(a[i], b[i]));
        g.push(Gate::ccx(b[i - 1], a[i - 1], a[i]));
    }
    for i in 1..n - 1 {
        g.push(Gate::cx(a[i], a[i + 1]));
    }
    for i in 0..n {
        g.push(Gate::cx(a[i], b[i]));
    }
}

fn complement(reg: &[Qubit], g: &mut Vec<Gate>) {
    g.extend(reg.iter().map(|&q| Gate::x(q)));
}

/// `|b> -> |b + c mod 2^m>` using `scratch` (at least `m` qubits in `|0>`,
/// restored afterwards) to hold the constant.
pub fn add_constant(reg: &[Qubit], c: u64, scratch: &[Qubit]) -> Result<Circuit> {
    let m = reg.len();
    let c = if m >= 64 { c } else { c & ((1u64 << m) - 1) };
    if c == 0 {
        return finish(&[reg], Vec::new());
    }
    if scratch.len() < m {
        return Err(Error::Capacity { needed: m, available: scratch.len() });
    }
    let tmp = &scratch[..m];
    check_distinct("add_constant", &[reg, tmp])?;
    let load: Vec<Gate> = (0..m).filter(|i| c >> i & 1 == 1).map(|i| Gate::x(tmp[i])).collect();
    let mut g = load.clone();
    add_gates(tmp, reg, None, &mut g);
    g.extend(load);
    finish(&[reg, tmp], g)
}

/// `|j> -> |k - j>` for `0 <= j <= k`: complement every bit, then add the
/// constant `k - (2^m - 1) mod 2^m`.
pub fn map_to_k_minus_j(reg: &[Qubit], k: u64, scratch: &[Qubit]) -> Result<Circuit> {
    let m = reg.len();
    if m < 64 && k >> m != 0 {
        return Err(Error::Capacity { needed: crate::binom::bit_width(k), available: m });
    }
    let mut circ = finish(&[reg], Vec::new())?;
    if m == 0 {
        return Ok(circ);
    }
    let all_ones = if m >= 64 { u64::MAX } else { (1u64 << m) - 1 };
    let mut g = Vec::new();
    complement(reg, &mut g);
    let flip = finish(&[reg], g)?;
    circ.widen(flip.n_qubits());
    circ.extend(&flip)?;
    let add = add_constant(reg, k.wrapping_sub(all_ones), scratch)?;
    circ.widen(add.n_qubits());
    circ.extend(&add)?;
    Ok(circ)
}

/// `|a>|b> -> |a>|b - a mod 2^m>`: the adder conjugated by complements of `b`.
pub fn subtract(a: &[Qubit], b: &[Qubit]) -> Result<Circuit> {
    if a.len() != b.len() {
        return Err(Error::Shape(alloc::format!("subtractor widths {} and {}", a.len(), b.len())));
    }
    check_distinct("subtract", &[a, b])?;
    let mut g = Vec::new();
    complement(b, &mut g);
    add_gates(a, b, None, &mut g);
    complement(b, &mut g);
    finish(&[a, b], g)
}

/// `|J>|0> -> |J>|k - J>` for `J <= k`: load the complement of `k`, add `J`,
/// complement the result.
pub fn load_k_minus(src: &[Qubit], dst: &[Qubit], k: u64) -> Result<Circuit> {
    if src.len() != dst.len() {
        return Err(Error::Shape(alloc::format!("register widths {} and {}", src.len(), dst.len())));
    }
    let m = dst.len();
    if m < 64 && k >> m != 0 {
        return Err(Error::Capacity { needed: crate::binom::bit_width(k), available: m });
    }
    check_distinct("load_k_minus", &[src, dst])?;
    let mut g: Vec<Gate> = (0..m).filter(|i| k >> i & 1 == 0).map(|i| Gate::x(dst[i])).collect();
    add_gates(src, dst, None, &mut g);
    complement(dst, &mut g);
    finish(&[src, dst], g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{basis_map, pack, unpack};

    #[test]
    fn adder_exhaustive_with_carry() {
        for m in 1..=4usize {
            let a: Vec<usize> = (0..m).collect();
            let b: Vec<usize> = (m..2 * m).collect();
            let z = 2 * m;
            let circ = ripple_add(&a, &b, Some(z)).unwrap();
            for x in 0..1u64 << m {
                for y in 0..1u64 << m {
                    for carry in 0..2u64 {
                        let input = pack(&[(&a, x), (&b, y), (&[z], carry)]);
                        let out = basis_map(&circ, input);
                        let sum = x + y;
                        assert_eq!(unpack(out, &a), x);
                        assert_eq!(unpack(out, &b), sum % (1 << m), "m={m} {x}+{y}");
                        assert_eq!(unpack(out, &[z]), carry ^ (sum >> m));
                    }
                }
            }
        }
    }

    #[test]
    fn adder_examples() {
        let (a, b) = ([0, 1, 2], [3, 4, 5]);
        let circ = ripple_add(&a, &b, Some(6)).unwrap();
        let out = basis_map(&circ, pack(&[(&a, 3), (&b, 2)]));
        assert_eq!((unpack(out, &a), unpack(out, &b), unpack(out, &[6])), (3, 5, 0));
        let out = basis_map(&circ, pack(&[(&a, 0), (&b, 6)]));
        assert_eq!(unpack(out, &b), 6);
        let (a, b) = ([0, 1], [2, 3]);
        let circ = ripple_add(&a, &b, Some(4)).unwrap();
        let out = basis_map(&circ, pack(&[(&a, 3), (&b, 2)]));
        assert_eq!((unpack(out, &b), unpack(out, &[4])), (1, 1));
    }

    #[test]
    fn adder_without_carry_wraps() {
        for m in 1..=4usize {
            let a: Vec<usize> = (0..m).collect();
            let b: Vec<usize> = (m..2 * m).collect();
            let circ = ripple_add(&a, &b, None).unwrap();
            for x in 0..1u64 << m {
                for y in 0..1u64 << m {
                    let out = basis_map(&circ, pack(&[(&a, x), (&b, y)]));
                    assert_eq!(unpack(out, &b), (x + y) % (1 << m));
                }
            }
        }
    }

    #[test]
    fn adder_shape_error() {
        assert!(matches!(ripple_add(&[0, 1], &[2], None), Err(Error::Shape(_))));
        assert!(ripple_add(&[0, 1], &[1, 2], None).is_err());
    }

    #[test]
    fn k_minus_j_exhaustive() {
        for k in 0..=15u64 {
            let m = crate::binom::bit_width(k);
            let reg: Vec<usize> = (0..m).collect();
            let scratch: Vec<usize> = (m..2 * m).collect();
            let circ = map_to_k_minus_j(&reg, k, &scratch).unwrap();
            for j in 0..=k {
                let out = basis_map(&circ, pack(&[(&reg, j)]));
                assert_eq!(unpack(out, &reg), k - j, "k={k} j={j}");
                assert_eq!(unpack(out, &scratch), 0, "scratch restored");
            }
        }
    }

    #[test]
    fn k_zero_is_empty() {
        assert!(map_to_k_minus_j(&[], 0, &[]).unwrap().is_empty());
    }

    #[test]
    fn subtract_and_load() {
        let (a, b) = ([0, 1, 2], [3, 4, 5]);
        let sub = subtract(&a, &b).unwrap();
        let load = load_k_minus(&a, &b, 6).unwrap();
        for x in 0..8u64 {
            for y in 0..8u64 {
                let out = basis_map(&sub, pack(&[(&a, x), (&b, y)]));
                assert_eq!(unpack(out, &b), (y + 8 - x) % 8);
            }
            if x <= 6 {
                let out = basis_map(&load, pack(&[(&a, x)]));
                assert_eq!((unpack(out, &a), unpack(out, &b)), (x, 6 - x));
            }
        }
    }

    #[test]
    fn constant_adder_needs_scratch() {
        assert!(matches!(add_constant(&[0, 1], 1, &[2]), Err(Error::Capacity { .. })));
        assert!(add_constant(&[0, 1], 4, &[]).unwrap().is_empty());
    }
}
