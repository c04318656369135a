//! Fermat and Rabin base counts, the Korselt test and per-integer summaries.

use serde::Serialize;

use super::arith::{gcd_u64, pow_mod};
use super::factor::{factor_u64, factorize, Factorization};
use crate::error::{Error, Result};

/// Default bound for [`enumerate_carmichaels`].
pub const DEFAULT_ENUMERATION_BOUND: u64 = 10_000_000;

/// Euler's totient from a factorisation: `k Π (1 - 1/p)`.
pub fn euler_phi(f: &Factorization) -> u64 {
    f.factors()
        .iter()
        .map(|&(p, e)| (p - 1) * p.pow(e - 1))
        .product()
}

/// Number of bases `1 <= a < k` coprime to `k` with `a^(k-1) = 1 mod k`,
/// computed as `Π gcd(p - 1, k - 1)` over the distinct primes of `k`.
pub fn fermat_nonwitness_count(f: &Factorization) -> Result<u64> {
    if f.is_prime() {
        return Err(Error::domain(format!(
            "{} is prime; the liar-count product applies to composites",
            f.value()
        )));
    }
    Ok(fermat_liars(f))
}

fn fermat_liars(f: &Factorization) -> u64 {
    let km1 = f.value() - 1;
    f.primes().map(|p| gcd_u64(p - 1, km1)).product()
}

/// 1 iff `a^(k-1) mod k == 1`.
pub fn z_flag(k: u64, a: u64) -> bool {
    debug_assert!(k >= 2);
    pow_mod(a, k - 1, k) == 1
}

/// 1 iff `gcd(a, k) == 1`; `g_flag(k, 0) == false` for every `k >= 2`.
pub fn g_flag(k: u64, a: u64) -> bool {
    gcd_u64(a, k) == 1
}

fn korselt(f: &Factorization) -> bool {
    let km1 = f.value() - 1;
    f.distinct_primes() >= 2 && f.is_squarefree() && f.primes().all(|p| km1 % (p - 1) == 0)
}

/// Korselt's criterion: squarefree, composite, and `p - 1 | k - 1` for every prime `p | k`.
///
/// Squarefree composites passing the divisibility test always have at least three
/// prime factors, so no separate count check is needed.
pub fn is_carmichael(k: u64) -> bool {
    if k < 3 || k % 2 == 0 {
        return false;
    }
    korselt(&factor_u64(k))
}

/// Rabin's witness test for an odd `k`: `a` witnesses compositeness iff
/// `a^(k-1) != 1 mod k`, or `1 < gcd(a^((k-1)/2^i) - 1, k) < k` for some `1 <= i <= s`
/// where `k - 1 = 2^s n` with `n` odd.
pub fn rabin_witness(k: u64, a: u64) -> Result<bool> {
    if k < 3 || k % 2 == 0 {
        return Err(Error::domain(format!("Rabin's test needs an odd k >= 3, got {k}")));
    }
    Ok(rabin_witness_unchecked(k, a))
}

pub(crate) fn rabin_witness_unchecked(k: u64, a: u64) -> bool {
    let km1 = k - 1;
    if pow_mod(a, km1, k) != 1 {
        return true;
    }
    let s = km1.trailing_zeros();
    (1..=s).any(|i| {
        let x = pow_mod(a, km1 >> i, k);
        let g = gcd_u64((x + k - 1) % k, k);
        1 < g && g < k
    })
}

/// Number of Rabin witnesses `1 <= a < k` for an odd `k` (zero when `k` is prime).
///
/// Uses Monier's closed form for the strong liars:
/// `(1 + (2^(w v) - 1) / (2^w - 1)) Π gcd(n, n_i)` where `k - 1 = 2^s n`,
/// `p_i - 1 = 2^(s_i) n_i`, `v = min s_i` and `w` is the number of distinct primes.
pub fn mr_witness_count(k: u64) -> Result<u64> {
    if k < 3 || k % 2 == 0 {
        return Err(Error::domain(format!("witness count needs an odd k >= 3, got {k}")));
    }
    Ok(rabin_witness_total(&factor_u64(k)))
}

/// Rabin witnesses among `1 <= a < k` for any `k >= 2`.
///
/// For even `k` the decomposition `k - 1 = 2^0 n` leaves only the Fermat condition,
/// so the witnesses are everything except the coprime Fermat liars.
pub(crate) fn rabin_witness_total(f: &Factorization) -> u64 {
    let k = f.value();
    if k % 2 == 0 {
        return (k - 1) - fermat_liars(f);
    }
    let km1 = k - 1;
    let odd_part = km1 >> km1.trailing_zeros();
    let w = f.distinct_primes() as u32;
    let v = f.primes().map(|p| (p - 1).trailing_zeros()).min().unwrap_or(0);
    let prod: u64 = f
        .primes()
        .map(|p| {
            let pm1 = p - 1;
            gcd_u64(odd_part, pm1 >> pm1.trailing_zeros())
        })
        .product();
    // (2^(wv) - 1) / (2^w - 1) = Σ_{j<v} 2^(wj)
    let geometric: u128 = (0..v).map(|j| 1u128 << (w * j)).sum();
    let liars = ((1 + geometric) * prod as u128) as u64;
    km1 - liars
}

/// Sorted Carmichael numbers strictly below `n`, with the default bound of 10^7.
pub fn enumerate_carmichaels(n: u64) -> Result<Vec<u64>> {
    enumerate_carmichaels_bounded(n, DEFAULT_ENUMERATION_BOUND)
}

pub fn enumerate_carmichaels_bounded(n: u64, bound: u64) -> Result<Vec<u64>> {
    if n < 2 {
        return Err(Error::domain(format!("enumeration bound must be at least 2, got {n}")));
    }
    if n > bound {
        return Err(Error::Capacity {
            what: "enumeration limit",
            requested: n as u128,
            limit: bound as u128,
        });
    }
    let spf = smallest_prime_factors(n as usize);
    let mut out = Vec::new();
    for k in (3..n as usize).step_by(2) {
        if spf[k] as usize == k {
            continue;
        }
        let km1 = k - 1;
        let mut rest = k;
        let mut ok = true;
        while rest > 1 {
            let p = spf[rest] as usize;
            rest /= p;
            if rest % p == 0 || km1 % (p - 1) != 0 {
                ok = false;
                break;
            }
        }
        if ok {
            out.push(k as u64);
        }
    }
    Ok(out)
}

fn smallest_prime_factors(n: usize) -> Vec<u32> {
    let mut spf = vec![0u32; n.max(2)];
    for i in 2..n {
        if spf[i] == 0 {
            spf[i] = i as u32;
            let mut j = i.saturating_mul(i);
            while j < n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    spf
}

/// Euler totients `φ(0..=n)` by sieve (`φ(0)` is reported as 0).
pub fn totients_up_to(n: usize) -> Vec<u64> {
    let mut phi: Vec<u64> = (0..=n as u64).collect();
    for i in 2..=n {
        if phi[i] == i as u64 {
            for j in (i..=n).step_by(i) {
                phi[j] -= phi[j] / i as u64;
            }
        }
    }
    phi
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Classification {
    Prime,
    CompositeCarmichael,
    CompositeNonCarmichael,
}

/// Classical record for one integer `k >= 2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumberFacts {
    pub k: u64,
    pub factorization: Factorization,
    pub phi: u64,
    /// Coprime Fermat liars `F(k)`; equals `phi` for primes.
    pub f_count: u64,
    /// Coprime bases failing the Fermat condition, `phi - f_count`.
    pub t_k: u64,
    /// Rabin witnesses among `1 <= a < k`.
    pub mr_witnesses: u64,
    pub classification: Classification,
}

impl NumberFacts {
    pub fn compute(k: u64) -> Result<Self> {
        let factorization = factorize(k)?;
        let phi = euler_phi(&factorization);
        let f_count = fermat_liars(&factorization);
        let classification = if factorization.is_prime() {
            Classification::Prime
        } else if korselt(&factorization) {
            Classification::CompositeCarmichael
        } else {
            Classification::CompositeNonCarmichael
        };
        Ok(NumberFacts {
            k,
            phi,
            f_count,
            t_k: phi - f_count,
            mr_witnesses: rabin_witness_total(&factorization),
            classification,
            factorization,
        })
    }

    pub fn is_composite(&self) -> bool {
        self.classification != Classification::Prime
    }

    /// `m` in `F(k) = φ(k) / m`.
    pub fn gap_ratio(&self) -> u64 {
        self.phi / self.f_count
    }
}
