//! Checked exact integer helpers.
//!
//! Every invariant is accumulated in `i128` with checked arithmetic: an overflow is
//! reported as [`Error::Overflow`] instead of wrapping.

use crate::error::{Error, Result};

/// Integer type used for all invariants.
pub type Int = i128;

/// Checked addition.
pub fn add(a: Int, b: Int) -> Result<Int> {
    a.checked_add(b).ok_or(Error::Overflow("sum"))
}

/// Checked multiplication.
pub fn mul(a: Int, b: Int) -> Result<Int> {
    a.checked_mul(b).ok_or(Error::Overflow("product"))
}

/// Checked power with a non-negative exponent.
pub fn pow(base: Int, exp: u64) -> Result<Int> {
    let e = u32::try_from(exp).map_err(|_| Error::Overflow("power"))?;
    base.checked_pow(e).ok_or(Error::Overflow("power"))
}

/// `(-1)^e`.
pub fn sign(e: i64) -> Int {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Exact division; fails loudly if `den` does not divide `num`.
pub fn exact_div(num: Int, den: Int) -> Result<Int> {
    if den == 0 || num % den != 0 {
        return Err(Error::Domain(format!("{num} is not divisible by {den}")));
    }
    Ok(num / den)
}

/// `n!`.
pub fn factorial(n: u64) -> Result<Int> {
    let mut acc: Int = 1;
    for i in 2..=n {
        acc = mul(acc, i as Int)?;
    }
    Ok(acc)
}

/// Binomial coefficient `C(n, k)`, zero when `k < 0` or `k > n` or `n < 0`.
pub fn binom(n: i64, k: i64) -> Result<Int> {
    if n < 0 || k < 0 || k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: Int = 1;
    for i in 0..k {
        acc = mul(acc, (n - i) as Int)?;
        acc /= (i + 1) as Int;
    }
    Ok(acc)
}

/// `a! / ((a - Σ a_i)! Π a_i!)`, zero when the parts exceed `a` or are negative.
pub fn multinom(a: i64, parts: &[i64]) -> Result<Int> {
    let mut rest = a;
    let mut acc: Int = 1;
    for &p in parts {
        if p < 0 || p > rest {
            return Ok(0);
        }
        acc = mul(acc, binom(rest, p)?)?;
        rest -= p;
    }
    Ok(acc)
}

/// `(2l)!! = (2l-1)(2l-3)...1`, the number of perfect matchings on `2l` points.
/// `m` must be even.
pub fn double_factorial_even(m: i64) -> Result<Int> {
    if m < 0 || m % 2 != 0 {
        return Err(Error::Domain(format!("(m)!! needs an even non-negative m, got {m}")));
    }
    let mut acc: Int = 1;
    let mut k = m - 1;
    while k > 1 {
        acc = mul(acc, k as Int)?;
        k -= 2;
    }
    Ok(acc)
}
