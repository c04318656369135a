//! Quantum counting: superpose iteration counts, apply the matching Grover power,
//! Fourier-transform the count register and read off the rotation angle.
//!
//! The outcome distribution has a closed form in terms of the Dirichlet-kernel
//! factors [`s_lp`]; [`count_dense_distribution`] produces the same table by
//! brute-force simulation.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qsim::{controlled_grover_powers, Distribution, GroverAngles, RegisterLayout};
use crate::rng::run_rng;

/// Below this `|sin(π x / P)|` the kernel takes its analytic limit.
pub const SINGULARITY_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// `sin(π(l ± f)) / (P sin(π(l ± f)/P))`.
///
/// Where `l ± f = jP` both sine factors vanish; the limit there is
/// `(-1)^(j(P+1))`, which is `1` at `j = 0`.
pub fn s_lp(l: usize, f: f64, p: usize, sign: Sign) -> f64 {
    let x = match sign {
        Sign::Plus => l as f64 + f,
        Sign::Minus => l as f64 - f,
    };
    kernel(x, p)
}

fn kernel(x: f64, p: usize) -> f64 {
    let pf = p as f64;
    let den = (PI * x / pf).sin();
    if den.abs() < SINGULARITY_THRESHOLD {
        let j = (x / pf).round() as i64;
        return if (j * (p as i64 + 1)).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    }
    (PI * x).sin() / (pf * den)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralAmplitude {
    pub l: usize,
    pub s_plus: f64,
    pub s_minus: f64,
}

pub fn spectral_amplitudes(f: f64, p: usize) -> Vec<SpectralAmplitude> {
    (0..p)
        .map(|l| SpectralAmplitude {
            l,
            s_plus: s_lp(l, f, p, Sign::Plus),
            s_minus: s_lp(l, f, p, Sign::Minus),
        })
        .collect()
}

fn check_count_args(d: u64, t: u64, p: usize) -> Result<GroverAngles> {
    if p < 2 {
        return Err(Error::domain(format!("count register needs P >= 2, got {p}")));
    }
    GroverAngles::new(d, t)
}

/// Outcome distribution of the count register: `P(l) = (s_{l+}^2 + s_{l-}^2) / 2`.
pub fn count_exact_distribution(d: u64, t: u64, p: usize) -> Result<Distribution> {
    count_joint_distribution(d, t, p, 1)
}

/// Joint outcome distribution of `R` count registers that jointly control
/// `G^(m_1 + .. + m_R)`: `(Π s_{l_i+}^2 + Π s_{l_i-}^2) / 2`.
pub fn count_joint_distribution(d: u64, t: u64, p: usize, r: usize) -> Result<Distribution> {
    let g = check_count_args(d, t, p)?;
    let kernels = spectral_amplitudes(g.f(p), p);
    let layout = RegisterLayout::new(vec![p; r.max(1)])?;
    let probs = (0..layout.dimension())
        .map(|flat| {
            let ls = layout.decode(flat);
            let plus: f64 = ls.iter().map(|&l| kernels[l].s_plus).product();
            let minus: f64 = ls.iter().map(|&l| kernels[l].s_minus).product();
            0.5 * (plus * plus + minus * minus)
        })
        .collect();
    Distribution::new(layout.dims().to_vec(), probs)
}

/// Closed-form amplitudes after the Fourier step, per joint outcome `(l_1..l_R)`:
/// the component along the normalised marked superposition and along the
/// normalised unmarked superposition.
///
/// With `φ = π f (R + (1 - R)/P)` and the common phase `e^{iπ(1 - 1/P) Σ l}`,
/// marked = `½(-i e^{iφ} Π s₊ + i e^{-iφ} Π s₋)`, unmarked = `½(e^{iφ} Π s₊ + e^{-iφ} Π s₋)`.
pub fn count_amplitudes(d: u64, t: u64, p: usize, r: usize) -> Result<Vec<(Complex64, Complex64)>> {
    if r == 0 {
        return Err(Error::domain("need at least one count register"));
    }
    let g = check_count_args(d, t, p)?;
    let f = g.f(p);
    let kernels = spectral_amplitudes(f, p);
    let layout = RegisterLayout::new(vec![p; r])?;
    let pf = p as f64;
    let phi = PI * f * (r as f64 + (1.0 - r as f64) / pf);
    let (ep, em) = (Complex64::from_polar(1.0, phi), Complex64::from_polar(1.0, -phi));
    let i = Complex64::i();
    Ok((0..layout.dimension())
        .map(|flat| {
            let ls = layout.decode(flat);
            let lsum: usize = ls.iter().sum();
            let common = Complex64::from_polar(0.5, PI * (1.0 - 1.0 / pf) * lsum as f64);
            let plus: f64 = ls.iter().map(|&l| kernels[l].s_plus).product();
            let minus: f64 = ls.iter().map(|&l| kernels[l].s_minus).product();
            let marked = common * (-i * ep * plus + i * em * minus);
            let unmarked = common * (ep * plus + em * minus);
            (marked, unmarked)
        })
        .collect())
}

/// Count-register distribution by dense simulation: build `Σ_m |m> G^m |u>`,
/// Fourier-transform the count register, take its marginal.
pub fn count_dense_distribution(d: usize, marked: impl Fn(usize) -> bool, p: usize) -> Result<Distribution> {
    controlled_grover_powers(p, 1, d, marked)?
        .qft(0)?
        .exact_distribution(&[0])
}

/// `π (D/Q) (π/Q + 2 √(t/D))`.
pub fn error_bound(d: u64, q: usize, t: f64) -> f64 {
    let (d, q) = (d as f64, q as f64);
    PI * (d / q) * (PI / q + 2.0 * (t.max(0.0) / d).sqrt())
}

/// `1 < f < Q/2 - 1`, the regime in which the four nearest outcomes carry at least 8/π².
pub fn in_ansatz(f: f64, q: usize) -> bool {
    f > 1.0 && f < q as f64 / 2.0 - 1.0
}

/// One measured count-register value and what it implies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CountEstimate {
    #[serde(rename = "l")]
    pub measured_l: usize,
    pub f_tilde: f64,
    pub theta_tilde: f64,
    pub t_tilde: f64,
    /// Error bound at the reference `t` when one is known, else at `t_tilde`.
    #[serde(rename = "bound")]
    pub error_bound: f64,
    pub in_ansatz: bool,
}

impl CountEstimate {
    /// Decodes outcome `l` of a `P`-level register over a `D`-dimensional search space:
    /// `f~ = min(l, P - l)`, `θ~ = π f~/P`, `t~ = D sin²θ~`.
    pub fn from_outcome(l: usize, d: u64, p: usize, reference_t: Option<u64>) -> Self {
        let f_tilde = l.min(p - l) as f64;
        let theta_tilde = PI * f_tilde / p as f64;
        let t_tilde = d as f64 * theta_tilde.sin().powi(2);
        let mut est = CountEstimate {
            measured_l: l,
            f_tilde,
            theta_tilde,
            t_tilde,
            error_bound: error_bound(d, p, t_tilde),
            in_ansatz: in_ansatz(f_tilde, p),
        };
        if let Some(t) = reference_t {
            est = est.with_reference(d, p, t);
        }
        est
    }

    /// Re-evaluates the bound and the ansatz flag at a known true count.
    pub fn with_reference(mut self, d: u64, p: usize, t: u64) -> Self {
        self.error_bound = error_bound(d, p, t as f64);
        self.in_ansatz = GroverAngles::new(d, t.min(d)).map(|g| in_ansatz(g.f(p), p)).unwrap_or(false);
        self
    }

    pub fn within_bound_of(&self, t: u64) -> bool {
        (self.t_tilde - t as f64).abs() <= self.error_bound
    }
}

/// Probability mass on `{⌊f⌋, ⌈f⌉, Q-⌊f⌋, Q-⌈f⌉}` (taken mod `Q`, without repeats).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeakProbability {
    pub f: f64,
    pub outcomes: Vec<usize>,
    pub probability: f64,
    pub in_ansatz: bool,
}

pub fn peak_success_probability(d: u64, t: u64, q: usize) -> Result<PeakProbability> {
    let g = check_count_args(d, t, q)?;
    let f = g.f(q);
    let dist = count_exact_distribution(d, t, q)?;
    // Snap rounding noise so that an integral f names one outcome, not two.
    let snapped = if (f - f.round()).abs() < 1e-9 { f.round() } else { f };
    let (lo, hi) = (snapped.floor() as usize, snapped.ceil() as usize);
    let mut outcomes: Vec<usize> = [lo, hi, q - lo, q - hi].iter().map(|&l| l % q).collect();
    outcomes.sort_unstable();
    outcomes.dedup();
    let probability = outcomes.iter().map(|&l| dist.probs()[l]).sum();
    Ok(PeakProbability {
        f,
        outcomes,
        probability,
        in_ansatz: in_ansatz(f, q),
    })
}

/// `reps` seeded runs of the counting procedure over a `D`-dimensional register.
///
/// Outcomes are drawn from the exact distribution; the bound in each estimate is
/// evaluated at its own `t~` (use [`CountEstimate::with_reference`] when the true
/// count is known).
pub fn run_count(
    d: u64,
    marked: impl Fn(u64) -> bool,
    p: usize,
    seed: u64,
    reps: usize,
) -> Result<Vec<CountEstimate>> {
    RegisterLayout::new(vec![p, d as usize])?;
    let t = (0..d).filter(|&v| marked(v)).count() as u64;
    let dist = count_exact_distribution(d, t, p)?;
    let mut rng = run_rng(seed, 0);
    Ok((0..reps)
        .map(|_| CountEstimate::from_outcome(dist.sample_flat(&mut rng), d, p, None))
        .collect())
}
