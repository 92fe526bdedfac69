//! Conversions between binary, one-hot and unary encodings.

use alloc::format;
use alloc::vec::Vec;

use super::{finish, Encoding, Register};
use crate::binom::bit_width;
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};

/// One-hot position that binary bit `l` may share a qubit with. Bit `l` is
/// cleared after stage `l`, and stage `l + 1` is the first to write position
/// `2^(l+1)`.
pub fn onehot_position_of_bit(l: usize) -> usize {
    1 << (l + 1)
}

fn expect(reg: &Register, encoding: Encoding, what: &str) -> Result<()> {
    if reg.encoding() == encoding {
        Ok(())
    } else {
        Err(Error::Argument(format!("{what} register must be {encoding:?}, got {:?}", reg.encoding())))
    }
}

/// `|j>|0...0> -> |0...0>|e_j>` for `0 <= j <= k`.
///
/// Starts from `e_0` (one X), then for each bit `l` a layer of controlled
/// swaps adds `j_l * 2^l` in one-hot form and CNOTs from the upper half
/// clear `j_l`. Binary bits may share qubits with one-hot positions at or
/// above [`onehot_position_of_bit`]; every qubit outside the final one-hot
/// value ends in `|0>`.
pub fn binary_to_onehot(k: usize, binary: &Register, onehot: &Register) -> Result<Circuit> {
    expect(binary, Encoding::Binary, "source")?;
    expect(onehot, Encoding::OneHot, "target")?;
    let m = bit_width(k as u64);
    if binary.len() < m {
        return Err(Error::Capacity { needed: m, available: binary.len() });
    }
    if onehot.len() < k + 1 {
        return Err(Error::Capacity { needed: k + 1, available: onehot.len() });
    }
    let positions = &onehot[..=k];
    for (l, q) in binary[..m].iter().enumerate() {
        if let Some(pos) = positions.iter().position(|p| p == q) {
            if pos < onehot_position_of_bit(l) {
                return Err(Error::Operand {
                    gate: "binary_to_onehot",
                    reason: format!("bit {l} shares qubit {q} with one-hot position {pos} before it is free"),
                });
            }
        }
    }
    let mut g = Vec::new();
    g.push(Gate::x(positions[0]));
    for (l, &bit) in binary[..m].iter().enumerate() {
        let half = 1usize << l;
        let pairs: Vec<usize> = (0..half).filter(|x| x + half <= k).collect();
        g.extend(pairs.iter().map(|&x| Gate::cswap(bit, positions[x], positions[x + half])));
        g.extend(pairs.iter().map(|&x| Gate::cx(positions[x + half], bit)));
    }
    finish(&[&binary[..m], positions], g)
}

/// `|e_j> -> |u_j>|0>`: a descending CNOT chain turns the one-hot value into
/// `j + 1` low ones, then an X clears position 0. The unary value lives on
/// positions `1..=k`.
pub fn onehot_to_unary(k: usize, onehot: &Register) -> Result<Circuit> {
    expect(onehot, Encoding::OneHot, "source")?;
    if onehot.len() < k + 1 {
        return Err(Error::Capacity { needed: k + 1, available: onehot.len() });
    }
    let mut g: Vec<Gate> = (0..k).rev().map(|i| Gate::cx(onehot[i + 1], onehot[i])).collect();
    g.push(Gate::x(onehot[0]));
    finish(&[&onehot[..=k]], g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{basis_map, pack, unpack};
    use alloc::vec;

    /// Shared layout: one-hot positions on qubits 0..=k, bit l < m-1
    /// on position 2^(l+1), top bit on qubit k+1.
    fn layout(k: usize) -> (Register, Register) {
        let m = bit_width(k as u64);
        let onehot: Vec<usize> = (0..=k).collect();
        let bits: Vec<usize> =
            (0..m).map(|l| if l + 1 < m { onehot_position_of_bit(l) } else { k + 1 }).collect();
        (Register::binary(bits).unwrap(), Register::one_hot(onehot).unwrap())
    }

    #[test]
    fn three_bit_examples() {
        let (bin, oh) = layout(3);
        let circ = binary_to_onehot(3, &bin, &oh).unwrap();
        let out = basis_map(&circ, pack(&[(&bin, 2)]));
        assert_eq!(out, 0b0100);
        let out = basis_map(&circ, pack(&[(&bin, 0)]));
        assert_eq!(out, 0b0001);
    }

    #[test]
    fn one_bit_example() {
        let (bin, oh) = layout(1);
        let circ = binary_to_onehot(1, &bin, &oh).unwrap();
        assert_eq!(basis_map(&circ, pack(&[(&bin, 1)])), 0b10);
    }

    #[test]
    fn unary_examples() {
        let oh = Register::one_hot(vec![0, 1, 2, 3]).unwrap();
        let circ = onehot_to_unary(3, &oh).unwrap();
        assert_eq!(circ.len(), 4);
        assert_eq!(circ.depth().unwrap(), 4);
        assert_eq!(basis_map(&circ, 0b0100), 0b0110);
        assert_eq!(basis_map(&circ, 0b0001), 0b0000);
        assert_eq!(basis_map(&circ, 0b1000), 0b1110);
    }

    #[test]
    fn round_trip_all_values() {
        for k in 0..=15usize {
            let (bin, oh) = layout(k);
            let mut circ = binary_to_onehot(k, &bin, &oh).unwrap();
            let tail = onehot_to_unary(k, &oh).unwrap();
            circ.widen(tail.n_qubits());
            circ.extend(&tail).unwrap();
            for j in 0..=k as u64 {
                let out = basis_map(&circ, pack(&[(&bin, j)]));
                let unary = (1u64 << j) - 1;
                assert_eq!(out, unary << 1, "k={k} j={j}");
                assert_eq!(unpack(out, &oh[1..]), unary);
            }
        }
    }

    #[test]
    fn capacity_and_overlap_errors() {
        let bin = Register::binary(vec![5, 6]).unwrap();
        let small = Register::one_hot(vec![0, 1, 2]).unwrap();
        assert!(matches!(binary_to_onehot(3, &bin, &small), Err(Error::Capacity { .. })));
        let clash = Register::binary(vec![1, 4]).unwrap();
        let oh = Register::one_hot(vec![0, 1, 2, 3]).unwrap();
        assert!(matches!(binary_to_onehot(3, &clash, &oh), Err(Error::Operand { .. })));
        assert!(binary_to_onehot(3, &oh, &oh).is_err());
    }
}
