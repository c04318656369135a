//! Brute-force ground truth over every base `1 <= a < k`.
//!
//! These routines never look at a factorisation; they exist to cross-check the
//! closed forms in [`super::pseudoprime`]. Inputs are capped (default 10^6).

use super::arith::{gcd_u64, is_prime, pow_mod};
use super::pseudoprime::rabin_witness_unchecked;
use crate::error::{Error, Result};

pub const DEFAULT_CENSUS_BOUND: u64 = 1_000_000;

fn check(k: u64) -> Result<()> {
    if k < 2 {
        return Err(Error::domain(format!("census needs k >= 2, got {k}")));
    }
    if k > DEFAULT_CENSUS_BOUND {
        return Err(Error::Capacity {
            what: "census input",
            requested: k as u128,
            limit: DEFAULT_CENSUS_BOUND as u128,
        });
    }
    Ok(())
}

/// `#{1 <= a <= k : gcd(a, k) = 1}`.
pub fn coprime_count(k: u64) -> Result<u64> {
    check(k)?;
    Ok((1..=k).filter(|&a| gcd_u64(a, k) == 1).count() as u64)
}

/// `#{1 <= a < k : gcd(a, k) = 1, a^(k-1) = 1 mod k}`.
pub fn fermat_liars(k: u64) -> Result<u64> {
    check(k)?;
    Ok((1..k)
        .filter(|&a| gcd_u64(a, k) == 1 && pow_mod(a, k - 1, k) == 1)
        .count() as u64)
}

/// Rabin witnesses among `1 <= a < k`; for even `k` only the Fermat condition applies.
pub fn rabin_witnesses(k: u64) -> Result<u64> {
    check(k)?;
    if k == 2 {
        return Ok(0);
    }
    Ok((1..k).filter(|&a| rabin_witness_unchecked(k, a)).count() as u64)
}

/// Definitional Carmichael test: composite and every coprime base is a Fermat liar.
pub fn is_carmichael(k: u64) -> Result<bool> {
    check(k)?;
    if is_prime(k) {
        return Ok(false);
    }
    Ok((2..k).all(|a| gcd_u64(a, k) != 1 || pow_mod(a, k - 1, k) == 1))
}
