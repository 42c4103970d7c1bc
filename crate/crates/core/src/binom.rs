//! Exact integer binomial coefficients.
//!
//! Negative or out-of-range lower indices evaluate to zero, which is the
//! convention every closed form in this crate relies on (for example a
//! Johnson graph degree of `C(k,t)·C(n-k,k-t)` when `n-k < k-t`).

use crate::error::{Error, Result};

/// `C(n, k)` in `u128`, or `None` on overflow.
pub fn checked_binomial(n: i64, k: i64) -> Option<u128> {
    if k < 0 || n < 0 || k > n {
        return Some(0);
    }
    let k = k.min(n - k) as u128;
    let n = n as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step.
        let g = gcd(acc, i + 1);
        let (a, d) = (acc / g, (i + 1) / g);
        acc = a.checked_mul((n - i) / d)?;
    }
    Some(acc)
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// `C(n, k)`, erroring on overflow.
pub fn binomial(n: i64, k: i64) -> Result<u128> {
    checked_binomial(n, k).ok_or_else(|| Error::Overflow(format!("C({n},{k})")))
}

/// `C(n, k)` for arguments known to be small. Panics on overflow.
pub(crate) fn binom(n: i64, k: i64) -> u128 {
    checked_binomial(n, k).unwrap_or_else(|| panic!("C({n},{k}) overflows u128"))
}

pub(crate) fn mul(a: u128, b: u128, what: &str) -> Result<u128> {
    a.checked_mul(b)
        .ok_or_else(|| Error::Overflow(what.to_string()))
}

pub fn factorial(n: u32) -> Result<u128> {
    (1..=n as u128)
        .try_fold(1u128, |acc, i| acc.checked_mul(i))
        .ok_or_else(|| Error::Overflow(format!("{n}!")))
}
