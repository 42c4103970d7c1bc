//! Generalized binomials `C(x, k)` with real `x`, their inverse, and the
//! Lovász form of the Kruskal–Katona shadow bound: a `k`-uniform family of
//! size `C(x, k)` has at least `C(x, i)` sets in its `i`-shadow.

use crate::binom::binomial;
use crate::enumerate::all_ksets;
use crate::error::{usage, Result};
use crate::setfam::Family;

const BISECTION_STEPS: usize = 200;
const TOLERANCE: f64 = 1e-9;

/// `x(x-1)...(x-k+1) / k!` for `x >= k - 1`.
pub fn real_binomial(x: f64, k: u32) -> Result<f64> {
    if k == 0 {
        return usage("real binomial needs k >= 1");
    }
    if x.is_nan() || x < (k - 1) as f64 {
        return usage(format!("real binomial needs x >= k-1 = {}, got {x}", k - 1));
    }
    if x.fract() == 0.0 && x < i64::MAX as f64 {
        if let Ok(v) = binomial(x as i64, k as i64) {
            return Ok(v as f64);
        }
    }
    Ok(real_binomial_unchecked(x, k))
}

fn real_binomial_unchecked(x: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (x - i as f64) / (i + 1) as f64)
}

/// The unique `x >= k - 1` with `C(x, k) = m`, by bisection on
/// `[k-1, k-1 + max(2m, 2k)]`.
pub fn invert_binomial(m: f64, k: u32) -> Result<f64> {
    if k == 0 {
        return usage("inversion needs k >= 1");
    }
    if m.is_nan() || m < 0.0 {
        return usage(format!("inversion needs m >= 0, got {m}"));
    }
    let base = (k - 1) as f64;
    if m == 0.0 {
        return Ok(base);
    }
    let (mut lo, mut hi) = (base, base + (2.0 * m).max(2.0 * k as f64));
    for _ in 0..BISECTION_STEPS {
        if hi - lo <= TOLERANCE * 1e-3 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if real_binomial_unchecked(mid, k) < m {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    // snap to an integer root when one is within tolerance
    let r = x.round();
    if (x - r).abs() <= TOLERANCE && r >= base && real_binomial(r, k)? == m {
        return Ok(r);
    }
    Ok(x)
}

/// `C(x, i)` with `C(x, k) = family_size`: a lower bound on the `i`-shadow of
/// any `k`-uniform family of that size.
pub fn kk_shadow_lower_bound(family_size: u128, k: u32, i: u32) -> Result<f64> {
    if i == 0 || i >= k {
        return usage(format!(
            "shadow level must satisfy 1 <= i <= k-1, got i={i} k={k}"
        ));
    }
    let x = invert_binomial(family_size as f64, k)?;
    // x >= k-1 >= i, so the product formula is in range
    real_binomial(x, i)
}

/// The first `m` `k`-subsets of `[n]` in colex order.
pub fn colex_segment(m: u128, n: u32, k: u32) -> Result<Family> {
    let total = binomial(n as i64, k as i64)?;
    if m > total || k > n {
        return usage(format!("segment length {m} exceeds C({n},{k}) = {total}"));
    }
    Family::new(n, k, all_ksets(n, k).take(m as usize).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_binomial_examples() {
        assert_eq!(real_binomial(4.0, 2).unwrap(), 6.0);
        assert_eq!(real_binomial(2.0, 3).unwrap(), 0.0);
        assert!((real_binomial(4.5, 2).unwrap() - 7.875).abs() < 1e-12);
        assert!(real_binomial(1.5, 3).is_err());
        assert!(real_binomial(3.0, 0).is_err());
    }

    #[test]
    fn real_binomial_increasing() {
        for k in 1..6 {
            let mut prev = real_binomial((k - 1) as f64, k).unwrap();
            let mut x = (k - 1) as f64;
            for _ in 0..500 {
                x += 0.037;
                let v = real_binomial(x, k).unwrap();
                assert!(v > prev);
                prev = v;
            }
        }
    }

    #[test]
    fn inversion_examples() {
        assert_eq!(invert_binomial(6.0, 2).unwrap(), 4.0);
        assert_eq!(invert_binomial(0.0, 3).unwrap(), 2.0);
        assert!((invert_binomial(7.875, 2).unwrap() - 4.5).abs() < 1e-9);
        assert!(invert_binomial(-1.0, 2).is_err());
    }

    #[test]
    fn shadow_bound_examples() {
        assert!((kk_shadow_lower_bound(6, 2, 1).unwrap() - 4.0).abs() < 1e-9);
        assert!((kk_shadow_lower_bound(1, 3, 2).unwrap() - 3.0).abs() < 1e-9);
        // C(x,2) = 4 -> x = (1 + sqrt(33)) / 2
        let want = (1.0 + 33f64.sqrt()) / 2.0;
        let got = kk_shadow_lower_bound(4, 2, 1).unwrap();
        assert!((got - want).abs() < 1e-9);
        assert!((got - 3.372).abs() < 1e-3);
        assert!(kk_shadow_lower_bound(4, 2, 2).is_err());
        assert!(kk_shadow_lower_bound(4, 2, 0).is_err());
    }

    #[test]
    fn colex_segment_examples() {
        assert!(colex_segment(0, 5, 2).unwrap().is_empty());
        assert_eq!(colex_segment(10, 5, 2).unwrap().len(), 10);
        let seg = colex_segment(4, 5, 2).unwrap();
        assert_eq!(
            seg,
            Family::from_lists(5, 2, &[&[1, 2], &[1, 3], &[2, 3], &[1, 4]]).unwrap()
        );
        assert!(colex_segment(11, 5, 2).is_err());
    }
}
