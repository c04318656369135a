//! Deterministic integer factorisation: trial division, then Brent's variant
//! of Pollard rho with every cofactor certified by [`is_prime`].

use serde::Serialize;

use super::arith::{gcd_u64, is_prime, mul_mod};
use crate::error::{Error, Result};

/// Default upper bound on inputs accepted by [`factorize`].
pub const DEFAULT_FACTOR_BOUND: u64 = 1 << 50;

const TRIAL_LIMIT: u64 = 1 << 10;

/// Prime factorisation `k = Π p^e`, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    k: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Builds a factorisation from `(prime, exponent)` pairs, checking every invariant.
    pub fn from_factors(factors: Vec<(u64, u32)>) -> Result<Self> {
        let mut k: u64 = 1;
        for (i, &(p, e)) in factors.iter().enumerate() {
            if e == 0 {
                return Err(Error::domain(format!("exponent of {p} is zero")));
            }
            if i > 0 && factors[i - 1].0 >= p {
                return Err(Error::domain("primes must be strictly increasing"));
            }
            if !is_prime(p) {
                return Err(Error::domain(format!("{p} is not prime")));
            }
            for _ in 0..e {
                k = k
                    .checked_mul(p)
                    .ok_or_else(|| Error::domain("factorisation overflows u64"))?;
            }
        }
        if k < 2 {
            return Err(Error::domain("empty factorisation"));
        }
        Ok(Factorization { k, factors })
    }

    pub fn value(&self) -> u64 {
        self.k
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn is_prime(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn distinct_primes(&self) -> usize {
        self.factors.len()
    }
}

/// Factorises `k` with the default bound of 2^50.
pub fn factorize(k: u64) -> Result<Factorization> {
    factorize_bounded(k, DEFAULT_FACTOR_BOUND)
}

pub fn factorize_bounded(k: u64, bound: u64) -> Result<Factorization> {
    if k < 2 {
        return Err(Error::domain(format!("cannot factorise {k}")));
    }
    if k > bound {
        return Err(Error::Capacity {
            what: "factorisation input",
            requested: k as u128,
            limit: bound as u128,
        });
    }
    Ok(factor_u64(k))
}

/// Unbounded factorisation for internal callers; valid for every `k >= 2`.
pub(crate) fn factor_u64(mut k: u64) -> Factorization {
    debug_assert!(k >= 2);
    let mut primes = Vec::new();
    let mut p = 2u64;
    while p < TRIAL_LIMIT && p * p <= k {
        while k % p == 0 {
            primes.push(p);
            k /= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if k > 1 {
        split_into(k, &mut primes);
    }
    primes.sort_unstable();

    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut value = 1u64;
    for q in primes {
        value *= q;
        match factors.last_mut() {
            Some((last, e)) if *last == q => *e += 1,
            _ => factors.push((q, 1)),
        }
    }
    Factorization { k: value, factors }
}

fn split_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    if let Some(r) = perfect_square_root(n) {
        split_into(r, out);
        split_into(r, out);
        return;
    }
    let d = brent_rho(n);
    split_into(d, out);
    split_into(n / d, out);
}

fn perfect_square_root(n: u64) -> Option<u64> {
    let n128 = n as u128;
    let mut r = (n as f64).sqrt() as u128;
    while r * r > n128 {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n128 {
        r += 1;
    }
    (r * r == n128).then_some(r as u64)
}

/// Returns a non-trivial divisor of the odd composite `n`.
fn brent_rho(n: u64) -> u64 {
    const BATCH: u64 = 128;
    for c in 1u64.. {
        let f = |x: u64| ((mul_mod(x, x, n) as u128 + c as u128) % n as u128) as u64;
        let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
        let mut x;
        let mut ys;
        let mut g;
        loop {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            loop {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd_u64(q, n);
                k += BATCH;
                if k >= r || g != 1 {
                    break;
                }
            }
            r *= 2;
            if g != 1 {
                break;
            }
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd_u64(x.abs_diff(ys), n);
                if g != 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!("rho exhausted every increment")
}
