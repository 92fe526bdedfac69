//! Exact integer combinatorics used for amplitude tables.

/// Largest `n` for which [`binomial`] is guaranteed not to overflow.
pub const MAX_N: u32 = 64;

/// `C(n, k)` computed exactly; zero when `k > n`.
///
/// Panics if `n > MAX_N`.
pub fn binomial(n: u32, k: u32) -> u128 {
    assert!(n <= MAX_N, "binomial: n = {n} exceeds {MAX_N}");
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step.
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc
}

/// Number of bits needed to hold every value in `0..=max`, i.e. `ceil(log2(max + 1))`.
pub fn bit_width(max: u64) -> usize {
    (u64::BITS - max.leading_zeros()) as usize
}

/// `ceil(log2(x))` for `x >= 1`; zero for `x <= 1`.
pub fn ceil_log2(x: u64) -> usize {
    if x <= 1 {
        0
    } else {
        bit_width(x - 1)
    }
}
