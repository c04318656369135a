use std::f64::consts::PI;

use serde::Serialize;

use super::certify::leakage;
use crate::error::{Error, Result};
use crate::numtheory::{totients_up_to, Classification, NumberFacts, DEFAULT_ENUMERATION_BOUND};

/// Largest `N` accepted by [`perturbation_budget`]; every `k < N` gets a stored row.
pub const PERTURBATION_BUDGET_LIMIT: u64 = 1_000_000;

/// Leakage factors of one integer `k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BaseLeakage {
    pub k: u64,
    /// `P arcsin(√(w_k/k)) / π`, `w_k` the Rabin witnesses in `[1, k)`.
    pub g: f64,
    /// Leakage at the witness angle; 1 for primes.
    pub beta: f64,
    /// Leakage at the Fermat-failure angle `sin²θ = t_k/k`.
    pub alpha: f64,
    /// `√(φ(k)/k)`.
    pub sin_phi: f64,
    /// Set exactly for Carmichael numbers.
    pub f_phase: bool,
    pub prime: bool,
}

/// Per-`k` leakage factors below `N` and the aggregate correction norm
/// `(4/N) [Σ_C (φ/k) β² + Σ_NC (φ/k) (1 - β²) α²]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerturbationBudget {
    pub n: u64,
    pub p: usize,
    pub rows: Vec<BaseLeakage>,
    pub e_norm_sq: f64,
    /// `4π² / (3P²)`.
    pub e_norm_bound: f64,
    /// `2 / (√3 P)`, the claimed ceiling on `β` for composites.
    pub beta_bound: f64,
    pub phi_norm: f64,
}

impl PerturbationBudget {
    /// Composites whose `|β|` exceeds `2/(√3 P)`.
    pub fn beta_violations(&self) -> Vec<u64> {
        self.rows
            .iter()
            .filter(|r| !r.prime && r.beta.abs() > self.beta_bound)
            .map(|r| r.k)
            .collect()
    }

    pub fn primes_have_unit_beta(&self) -> bool {
        self.rows.iter().filter(|r| r.prime).all(|r| r.beta == 1.0)
    }

    pub fn e_norm_within_bound(&self) -> bool {
        self.e_norm_sq <= self.e_norm_bound
    }
}

pub fn perturbation_budget(n: u64, p: usize) -> Result<PerturbationBudget> {
    if n < 2 {
        return Err(Error::domain(format!("need N >= 2, got {n}")));
    }
    if p < 4 {
        return Err(Error::domain(format!("need P >= 4, got {p}")));
    }
    if n > PERTURBATION_BUDGET_LIMIT {
        return Err(Error::Capacity {
            what: "perturbation budget N",
            requested: n as u128,
            limit: PERTURBATION_BUDGET_LIMIT as u128,
        });
    }
    let pf = p as f64;
    let angle = |count: u64, k: u64| (count as f64 / k as f64).sqrt().asin();
    let mut rows = Vec::with_capacity(n as usize);
    let mut sum = 0.0;
    for k in 2..n {
        let facts = NumberFacts::compute(k)?;
        let witness_angle = angle(facts.mr_witnesses, k);
        let beta = leakage(witness_angle, p);
        let alpha = leakage(angle(facts.t_k, k), p);
        let weight = facts.phi as f64 / k as f64;
        match facts.classification {
            Classification::CompositeCarmichael => sum += weight * beta * beta,
            Classification::CompositeNonCarmichael => sum += weight * (1.0 - beta * beta) * alpha * alpha,
            Classification::Prime => {}
        }
        rows.push(BaseLeakage {
            k,
            g: pf * witness_angle / PI,
            beta,
            alpha,
            sin_phi: weight.sqrt(),
            f_phase: facts.classification == Classification::CompositeCarmichael,
            prime: facts.classification == Classification::Prime,
        });
    }
    Ok(PerturbationBudget {
        n,
        p,
        rows,
        e_norm_sq: 4.0 * sum / n as f64,
        e_norm_bound: 4.0 * PI * PI / (3.0 * pf * pf),
        beta_bound: 2.0 / (3f64.sqrt() * pf),
        phi_norm: phi_norm(n)?,
    })
}

/// `(Σ_{k=1..N} φ(k)/k) / N`.
pub fn phi_norm(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("need N >= 1"));
    }
    if n > DEFAULT_ENUMERATION_BOUND {
        return Err(Error::Capacity {
            what: "totient sieve N",
            requested: n as u128,
            limit: DEFAULT_ENUMERATION_BOUND as u128,
        });
    }
    let phi = totients_up_to(n as usize);
    let sum: f64 = (1..=n as usize).map(|k| phi[k] as f64 / k as f64).sum();
    Ok(sum / n as f64)
}

/// The mean of `φ(k)/k` set against `6/π²` (its limit) and `π²/6`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhiNormReport {
    pub n: u64,
    pub value: f64,
    pub six_over_pi_sq: f64,
    pub pi_sq_over_six: f64,
    /// Whether the value sits within 10^-3 of `π²/6`.
    pub matches_pi_sq_over_six: bool,
}

impl PhiNormReport {
    pub fn compute(n: u64) -> Result<Self> {
        let value = phi_norm(n)?;
        let pi_sq_over_six = PI * PI / 6.0;
        Ok(PhiNormReport {
            n,
            value,
            six_over_pi_sq: 1.0 / pi_sq_over_six,
            pi_sq_over_six,
            matches_pi_sq_over_six: (value - pi_sq_over_six).abs() < 1e-3,
        })
    }
}
