//! The Pomerance–Selfridge–Wagstaff density function and the bounds built on it.
//!
//! Implied constants of the asymptotic bounds are unknown; every bound here is
//! reported with constant 1.

use crate::error::{Error, Result};

/// Smallest accepted argument; `ln ln ln N > 0` needs `N > e^e ≈ 15.15`.
pub const PSW_MIN_N: f64 = 16.0;

/// `l(N) = exp(ln N · ln ln ln N / ln ln N)`, all logarithms natural.
pub fn psw_l(n: f64) -> Result<f64> {
    if !(n >= PSW_MIN_N) {
        return Err(Error::domain(format!("l(N) needs N >= 16, got {n}")));
    }
    let ln = n.ln();
    let lnln = ln.ln();
    Ok((ln * lnln.ln() / lnln).exp())
}

/// `(N / l(N)^(2+ε), N · l(N)^-(1-ε))`: conjectured lower and proven upper
/// density bounds for the count of Carmichael numbers below `N`.
pub fn psw_bounds(n: f64, epsilon: f64) -> Result<(f64, f64)> {
    if !(epsilon > 0.0) {
        return Err(Error::domain(format!("epsilon must be positive, got {epsilon}")));
    }
    let l = psw_l(n)?;
    Ok((n / l.powf(2.0 + epsilon), n * l.powf(-(1.0 - epsilon))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn triple_log_identities() {
        // ln ln ln N = 1 at N = e^(e^e), so l(N) = exp(e^e / e).
        let n = E.powf(E.powf(E));
        let expected = E.powf(E - 1.0).exp();
        assert!((psw_l(n).unwrap() - expected).abs() < 1e-9 * expected);
        // The exponent vanishes at N = e^e, just below the domain; l -> 1 there.
        let near = psw_l(PSW_MIN_N).unwrap();
        assert!(near > 1.0 && near < 1.06);
    }

    #[test]
    fn frozen_values() {
        // 40-digit mpmath evaluation of the closed form.
        assert!((psw_l(1e6).unwrap() - 160.665_695_542_600_5).abs() < 1e-6);
        let (lo, hi) = psw_bounds(1e4, 0.1).unwrap();
        assert!((lo - 9.600_469_486_275_336).abs() < 1e-6);
        assert!((hi - 508.975_377_963_852_3).abs() < 1e-6);
    }

    #[test]
    fn monotone_from_100() {
        let mut prev = psw_l(100.0).unwrap();
        let mut n = 100.0f64;
        while n < 1e15 {
            n *= 1.07;
            let l = psw_l(n).unwrap();
            assert!(l > prev, "l not increasing at {n}");
            prev = l;
        }
    }

    #[test]
    fn bound_orderings() {
        let mut n = 100.0;
        while n < 1e12 {
            let (lo, hi) = psw_bounds(n, 0.1).unwrap();
            assert!(lo < hi);
            n *= 3.0;
        }
        let (lo_small, _) = psw_bounds(1e6, 1e-6).unwrap();
        let (lo_one, _) = psw_bounds(1e6, 1.0).unwrap();
        assert!(lo_small > lo_one);
    }

    #[test]
    fn domain() {
        assert!(psw_l(15.9).is_err());
        assert!(psw_l(f64::NAN).is_err());
        assert!(psw_bounds(100.0, 0.0).is_err());
    }
}
