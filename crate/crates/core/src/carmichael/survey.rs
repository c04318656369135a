use serde::Serialize;

use crate::counting::{error_bound, peak_success_probability, run_count, CountEstimate, PeakProbability};
use crate::error::{Error, Result};
use crate::numtheory::{enumerate_carmichaels, gcd, psw_bounds, psw_l, z_flag, Classification, NumberFacts};

/// Counting estimates of the coprime Fermat failures of `k`, with the true count.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BaseCount {
    pub k: u64,
    pub p: usize,
    pub t_exact: u64,
    pub estimates: Vec<CountEstimate>,
}

/// Counts `{a < k : gcd(a, k) = 1, a^(k-1) != 1 mod k}` over a `k`-dimensional register.
pub fn count_nonpseudo_bases(k: u64, p: usize, seed: u64, reps: usize) -> Result<BaseCount> {
    let facts = NumberFacts::compute(k)?;
    if facts.classification == Classification::Prime {
        return Err(Error::precondition(format!("{k} is prime")));
    }
    let marked = |a: u64| gcd(a, k).map_or(false, |g| g == 1) && !z_flag(k, a);
    let estimates = run_count(k, marked, p, seed, reps)?
        .into_iter()
        .map(|e| e.with_reference(k, p, facts.t_k))
        .collect();
    Ok(BaseCount {
        k,
        p,
        t_exact: facts.t_k,
        estimates,
    })
}

/// Counting run over `[0, N)` with the Carmichael numbers marked.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CarmichaelCount {
    pub n: u64,
    pub q: usize,
    pub carmichaels: Vec<u64>,
    pub t_exact: u64,
    pub estimates: Vec<CountEstimate>,
    pub error_bound: f64,
    pub peak: PeakProbability,
    /// Fraction of estimates with `|t~ - t| <= error_bound`.
    pub success_fraction: f64,
}

pub fn count_carmichaels_quantum(n: u64, q: usize, seed: u64, reps: usize) -> Result<CarmichaelCount> {
    if reps == 0 {
        return Err(Error::domain("need at least one repetition"));
    }
    if n < 2 {
        return Err(Error::domain(format!("need N >= 2, got {n}")));
    }
    crate::qsim::RegisterLayout::new(vec![q, n as usize])?;
    let carmichaels = enumerate_carmichaels(n)?;
    let t = carmichaels.len() as u64;
    let mut marked = vec![false; n as usize];
    for &c in &carmichaels {
        marked[c as usize] = true;
    }
    let estimates: Vec<CountEstimate> = run_count(n, |v| marked[v as usize], q, seed, reps)?
        .into_iter()
        .map(|e| e.with_reference(n, q, t))
        .collect();
    let hits = estimates.iter().filter(|e| e.within_bound_of(t)).count();
    Ok(CarmichaelCount {
        n,
        q,
        t_exact: t,
        error_bound: error_bound(n, q, t as f64),
        peak: peak_success_probability(n, t, q)?,
        success_fraction: hits as f64 / reps as f64,
        carmichaels,
        estimates,
    })
}

/// Default slack added to the minimal exponent `1 + ε/2 + δ`.
pub const DEFAULT_Q_MARGIN: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum QPolicy {
    /// `Q = ⌈l(N)^(1 + ε/2 + δ + margin)⌉`.
    Auto { margin: f64 },
    Fixed(usize),
}

impl Default for QPolicy {
    fn default() -> Self {
        QPolicy::Auto {
            margin: DEFAULT_Q_MARGIN,
        }
    }
}

/// The CSV record of a density comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PswRow {
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "t_N")]
    pub t_n: u64,
    pub t_tilde: f64,
    pub dt_exp: f64,
    pub dt_th: f64,
    pub psw_lower: f64,
    pub psw_upper: f64,
    #[serde(rename = "Q")]
    pub q: usize,
    pub epsilon: f64,
    pub delta: f64,
}

/// Informational comparison of a counting run with the density heuristics.
/// Nothing here is a pass/fail claim about the asymptotics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PswReport {
    pub row: PswRow,
    pub l_n: f64,
    /// `log Q / log l(N)`.
    pub q_exponent: f64,
    /// `dt_exp < dt_th`.
    pub below_target: bool,
    /// `l(N)^(2 + ε + 2δ)`, the nominal query scale.
    pub query_scale: f64,
    pub success_fraction: f64,
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(|a, b| a.total_cmp(b));
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        0.5 * (xs[m - 1] + xs[m])
    }
}

pub fn psw_check(n: u64, epsilon: f64, delta: f64, policy: QPolicy, seed: u64, reps: usize) -> Result<PswReport> {
    if !(delta >= 0.0) {
        return Err(Error::domain(format!("delta must be non-negative, got {delta}")));
    }
    let (psw_lower, psw_upper) = psw_bounds(n as f64, epsilon)?;
    let l = psw_l(n as f64)?;
    let q = match policy {
        QPolicy::Fixed(q) => q,
        QPolicy::Auto { margin } => {
            if !(margin > 0.0) {
                return Err(Error::domain(format!("margin must be positive, got {margin}")));
            }
            l.powf(1.0 + epsilon / 2.0 + delta + margin).ceil() as usize
        }
    };
    if q < 2 {
        return Err(Error::domain(format!("need Q >= 2, got {q}")));
    }
    let count = count_carmichaels_quantum(n, q, seed, reps)?;
    let dt_exp = count.error_bound;
    let dt_th = n as f64 * l.powf(-(2.0 + epsilon + delta));
    Ok(PswReport {
        row: PswRow {
            n,
            t_n: count.t_exact,
            t_tilde: median(count.estimates.iter().map(|e| e.t_tilde).collect()),
            dt_exp,
            dt_th,
            psw_lower,
            psw_upper,
            q,
            epsilon,
            delta,
        },
        l_n: l,
        q_exponent: (q as f64).ln() / l.ln(),
        below_target: dt_exp < dt_th,
        query_scale: l.powf(2.0 + epsilon + 2.0 * delta),
        success_fraction: count.success_fraction,
    })
}
