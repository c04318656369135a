use std::f64::consts::PI;

use serde::Serialize;

use crate::counting::{count_joint_distribution, s_lp, Sign};
use crate::error::{Error, Result};
use crate::numtheory::{gcd, z_flag, Classification, NumberFacts};
use crate::qsim::{controlled_powers, Distribution, RegisterLayout, StateVector};
use crate::rng::run_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Dense simulation; the verdict carries the exact conditional all-zero probability.
    #[default]
    Exact,
    /// Outcomes drawn from the closed-form law; the error budget uses only the
    /// guaranteed Fermat gap, not the actual `t_k`.
    Sample,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroverScope {
    /// Flag first, Grover inside the coprime branch.
    #[default]
    CoprimeBranch,
    /// Grover on the whole register, flag afterwards.
    FullRegister,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VerdictKind {
    NotCarmichael,
    ProbablyCarmichael,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub k: u64,
    pub kind: VerdictKind,
    /// Probability that this verdict is wrong: 0 for `NotCarmichael`.
    pub error_bound: f64,
    pub observed_ancillas: Vec<usize>,
    /// Number of `flag = 0` outcomes before the accepted run.
    pub flag_retries: u64,
    pub grover_applications: u64,
    /// `P(all ancillas 0 | flag = 1)`, present in exact mode.
    pub allzero_probability: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CertifyParams {
    pub p: usize,
    pub r: usize,
    pub mode: Mode,
    pub scope: GroverScope,
}

impl Default for CertifyParams {
    fn default() -> Self {
        CertifyParams {
            p: 16,
            r: 2,
            mode: Mode::Exact,
            scope: GroverScope::CoprimeBranch,
        }
    }
}

/// `sin(πf) / (P sin(πf/P))` with `f = Pθ/π`; equals 1 at `θ = 0`.
pub fn leakage(theta: f64, p: usize) -> f64 {
    s_lp(0, p as f64 * theta / PI, p, Sign::Plus)
}

/// Worst-case `|leakage|` over `θ >= θ_min`: the Dirichlet kernel is bounded by
/// `1 / (P sin θ)` on `(0, π/2]`.
fn leakage_envelope(sin_theta_min: f64, p: usize) -> f64 {
    (1.0 / (p as f64 * sin_theta_min)).min(1.0)
}

/// Smallest `sin²θ` a non-Carmichael `k` can present to the search.
fn gap_sin_sq(facts: &NumberFacts, scope: GroverScope) -> f64 {
    match scope {
        GroverScope::CoprimeBranch => 0.5,
        GroverScope::FullRegister => facts.phi as f64 / (2.0 * facts.k as f64),
    }
}

/// `⌈π/θ_min⌉`: the smallest count register whose peak `f` exceeds 1 at the guaranteed gap.
pub fn recommended_p(k: u64, scope: GroverScope) -> Result<usize> {
    let facts = composite_facts(k)?;
    let theta = gap_sin_sq(&facts, scope).sqrt().asin();
    Ok((PI / theta - 1e-9).ceil() as usize)
}

fn composite_facts(k: u64) -> Result<NumberFacts> {
    let facts = NumberFacts::compute(k)?;
    if facts.classification == Classification::Prime {
        return Err(Error::precondition(format!("{k} is prime; certification needs a composite")));
    }
    Ok(facts)
}

/// Exact `φ(k)/k` in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FlagProbability {
    pub numerator: u64,
    pub denominator: u64,
}

impl FlagProbability {
    pub fn value(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

pub fn flag_probability(k: u64) -> Result<FlagProbability> {
    let facts = NumberFacts::compute(k)?;
    let g = gcd(facts.phi, k)?;
    Ok(FlagProbability {
        numerator: facts.phi / g,
        denominator: k / g,
    })
}

/// All-zero ancilla probabilities from the dense simulation, next to the two
/// closed-form candidates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AllZeroReport {
    pub k: u64,
    pub p: usize,
    pub r: usize,
    pub scope: GroverScope,
    /// `P(all 0 | flag = 1)`.
    pub conditional: f64,
    /// `P(all 0)` without conditioning on the flag.
    pub joint: f64,
    pub flag_probability: f64,
    /// `α^(2R)` with `sin²θ = t_k / k`.
    pub register_alpha_power: f64,
    /// `α^(2R)` with `sin²θ = t_k / φ(k)`.
    pub branch_alpha_power: f64,
}

/// A composite `k` with its outcome laws computed once, so that many seeded
/// runs can be drawn cheaply.
#[derive(Debug, Clone)]
pub struct Certifier {
    facts: NumberFacts,
    params: CertifyParams,
    flag: Distribution,
    ancillas: Distribution,
    joint_allzero: f64,
    powers_per_attempt: u64,
}

impl Certifier {
    pub fn prepare(k: u64, params: CertifyParams) -> Result<Self> {
        let facts = composite_facts(k)?;
        if params.p < 4 {
            return Err(Error::domain(format!("need P >= 4, got {}", params.p)));
        }
        if params.r < 1 {
            return Err(Error::domain("need R >= 1"));
        }
        let powers_per_attempt = (params.r * (params.p - 1)) as u64;
        if params.mode == Mode::Sample && params.scope == GroverScope::CoprimeBranch {
            return Self::from_closed_form(facts, params, powers_per_attempt);
        }
        Self::from_dense(facts, params, powers_per_attempt)
    }

    fn from_closed_form(facts: NumberFacts, params: CertifyParams, powers_per_attempt: u64) -> Result<Self> {
        let pf = facts.phi as f64 / facts.k as f64;
        let flag = Distribution::new(vec![2], vec![1.0 - pf, pf])?;
        let ancillas = count_joint_distribution(facts.phi, facts.t_k, params.p, params.r)?;
        // The non-coprime branch is inert, so its ancillas read all zeros.
        let joint_allzero = pf * ancillas.probs()[0] + (1.0 - pf);
        Ok(Certifier {
            facts,
            params,
            flag,
            ancillas,
            joint_allzero,
            powers_per_attempt,
        })
    }

    fn from_dense(facts: NumberFacts, params: CertifyParams, powers_per_attempt: u64) -> Result<Self> {
        let (k, p, r) = (facts.k, params.p, params.r);
        let mut dims = vec![p; r];
        dims.extend([k as usize, 2]);
        RegisterLayout::new(dims)?;

        let coprime: Vec<bool> = (0..k).map(|a| gcd(a, k).map_or(false, |g| g == 1)).collect();
        let marked: Vec<bool> = (0..k).map(|a| coprime[a as usize] && !z_flag(k, a)).collect();
        let ancilla_dims = vec![p; r];
        let register = StateVector::uniform(RegisterLayout::new(vec![k as usize])?);

        let mut state = match params.scope {
            GroverScope::CoprimeBranch => {
                let base = register.with_register(2)?.controlled_increment(0, 1, |a| coprime[a])?;
                controlled_powers(&ancilla_dims, base, |s| {
                    s.grover_iterate_within(0, |a| marked[a], |a| coprime[a])
                })?
                .0
            }
            GroverScope::FullRegister => {
                controlled_powers(&ancilla_dims, register, |s| s.grover_iterate(0, |a| marked[a]))?
                    .0
                    .with_register(2)?
                    .controlled_increment(r, r + 1, |a| coprime[a])?
            }
        };
        for reg in 0..r {
            state = state.qft(reg)?;
        }
        let anc_regs: Vec<usize> = (0..r).collect();
        let flag = state.exact_distribution(&[r + 1])?;
        let joint_allzero = state.exact_distribution(&anc_regs)?.probs()[0];
        let (post, _) = state.postselect(r + 1, 1)?;
        let ancillas = post.exact_distribution(&anc_regs)?;
        Ok(Certifier {
            facts,
            params,
            flag,
            ancillas,
            joint_allzero,
            powers_per_attempt,
        })
    }

    /// Dense-simulation flag rate for any `k >= 2`, primes included.
    pub fn simulated_flag_probability(k: u64, params: CertifyParams) -> Result<f64> {
        if params.p < 2 || params.r < 1 {
            return Err(Error::domain("need P >= 2 and R >= 1"));
        }
        let facts = NumberFacts::compute(k)?;
        let powers = (params.r * (params.p - 1)) as u64;
        Ok(Self::from_dense(facts, params, powers)?.flag_probability())
    }

    pub fn facts(&self) -> &NumberFacts {
        &self.facts
    }

    pub fn params(&self) -> CertifyParams {
        self.params
    }

    /// Probability of `flag = 1` in the simulated state.
    pub fn flag_probability(&self) -> f64 {
        self.flag.probs()[1]
    }

    /// Ancilla outcome law conditioned on `flag = 1`.
    pub fn ancilla_distribution(&self) -> &Distribution {
        &self.ancillas
    }

    pub fn conditional_allzero(&self) -> f64 {
        self.ancillas.probs()[0]
    }

    pub fn joint_allzero(&self) -> f64 {
        self.joint_allzero
    }

    /// Probability that a `ProbablyCarmichael` verdict is wrong.
    ///
    /// Exact mode uses the computed all-zero probability (0 when `k` is Carmichael);
    /// sample mode uses the worst case over every `t` allowed by the Fermat gap.
    pub fn error_budget(&self) -> f64 {
        match self.params.mode {
            Mode::Exact if self.facts.t_k == 0 => 0.0,
            Mode::Exact => self.conditional_allzero(),
            Mode::Sample => {
                let env = leakage_envelope(gap_sin_sq(&self.facts, self.params.scope).sqrt(), self.params.p);
                env.powi(2 * self.params.r as i32)
            }
        }
    }

    pub fn allzero_report(&self) -> AllZeroReport {
        let (k, p, r) = (self.facts.k, self.params.p, self.params.r);
        let power = |sin_sq: f64| leakage(sin_sq.sqrt().asin(), p).powi(2 * r as i32);
        AllZeroReport {
            k,
            p,
            r,
            scope: self.params.scope,
            conditional: self.conditional_allzero(),
            joint: self.joint_allzero,
            flag_probability: self.flag_probability(),
            register_alpha_power: power(self.facts.t_k as f64 / k as f64),
            branch_alpha_power: power(self.facts.t_k as f64 / self.facts.phi as f64),
        }
    }

    /// One run: repeat until the flag reads 1, then measure the ancillas.
    /// Randomness comes from the `(seed, run_index)` stream only.
    pub fn run(&self, seed: u64, run_index: u64) -> Verdict {
        let mut rng = run_rng(seed, run_index);
        let mut retries = 0u64;
        while self.flag.sample_flat(&mut rng) == 0 {
            retries += 1;
        }
        let observed = self.ancillas.sample(&mut rng);
        let kind = if observed.iter().all(|&l| l == 0) {
            VerdictKind::ProbablyCarmichael
        } else {
            VerdictKind::NotCarmichael
        };
        Verdict {
            k: self.facts.k,
            kind,
            error_bound: match kind {
                VerdictKind::NotCarmichael => 0.0,
                VerdictKind::ProbablyCarmichael => self.error_budget(),
            },
            observed_ancillas: observed,
            flag_retries: retries,
            grover_applications: self.powers_per_attempt * (retries + 1),
            allzero_probability: (self.params.mode == Mode::Exact).then(|| self.conditional_allzero()),
        }
    }

    /// Runs `0..reps` of the same seed, in run order.
    pub fn run_many(&self, seed: u64, reps: usize) -> Vec<Verdict> {
        (0..reps as u64).map(|i| self.run(seed, i)).collect()
    }
}

/// Majority over repeated verdicts; ties go to `NotCarmichael`, which is never wrong.
pub fn majority_kind(verdicts: &[Verdict]) -> Option<VerdictKind> {
    if verdicts.is_empty() {
        return None;
    }
    let probable = verdicts
        .iter()
        .filter(|v| v.kind == VerdictKind::ProbablyCarmichael)
        .count();
    Some(if 2 * probable > verdicts.len() {
        VerdictKind::ProbablyCarmichael
    } else {
        VerdictKind::NotCarmichael
    })
}

/// Single seeded certification run with the default flag placement.
pub fn certify(k: u64, p: usize, r: usize, mode: Mode, seed: u64) -> Result<Verdict> {
    let params = CertifyParams {
        p,
        r,
        mode,
        scope: GroverScope::CoprimeBranch,
    };
    Ok(Certifier::prepare(k, params)?.run(seed, 0))
}

pub fn allzero_probability(k: u64, p: usize, r: usize) -> Result<AllZeroReport> {
    allzero_probability_with(k, p, r, GroverScope::CoprimeBranch)
}

pub fn allzero_probability_with(k: u64, p: usize, r: usize, scope: GroverScope) -> Result<AllZeroReport> {
    let params = CertifyParams {
        p,
        r,
        mode: Mode::Exact,
        scope,
    };
    Ok(Certifier::prepare(k, params)?.allzero_report())
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-10;

    #[test]
    fn carmichael_numbers_read_all_zero() {
        for k in [561u64, 1105] {
            let c = Certifier::prepare(k, CertifyParams::default()).unwrap();
            assert!((c.conditional_allzero() - 1.0).abs() < TOL);
            for i in 0..20 {
                let v = c.run(3, i);
                assert_eq!(v.kind, VerdictKind::ProbablyCarmichael);
                assert_eq!(v.error_bound, 0.0);
                assert_eq!(v.observed_ancillas, vec![0, 0]);
            }
        }
    }

    #[test]
    fn fifteen() {
        let rep = allzero_probability(15, 16, 2).unwrap();
        assert!((rep.flag_probability - 8.0 / 15.0).abs() < TOL);
        assert!((rep.conditional - rep.branch_alpha_power).abs() < TOL);
        // Within the coprime branch sin²θ = 4/8, so the peak sits at f = 4: no leakage.
        assert!(rep.conditional < TOL);
        let v = certify(15, 16, 2, Mode::Exact, 42).unwrap();
        assert_eq!(v.kind, VerdictKind::NotCarmichael);
        assert_eq!(v.error_bound, 0.0);
    }

    #[test]
    fn full_register_joint_matches_register_angle() {
        for k in [15u64, 21, 25, 91] {
            let rep = allzero_probability_with(k, 8, 2, GroverScope::FullRegister).unwrap();
            assert!((rep.joint - rep.register_alpha_power).abs() < TOL, "k={k}");
        }
    }

    #[test]
    fn branch_conditional_matches_branch_angle() {
        for k in [4u64, 9, 15, 21, 25, 45, 91, 341] {
            for r in [1usize, 2] {
                let rep = allzero_probability(k, 8, r).unwrap();
                assert!((rep.conditional - rep.branch_alpha_power).abs() < TOL, "k={k} r={r}");
                assert!((rep.flag_probability - flag_probability(k).unwrap().value()).abs() < TOL);
                assert!(rep.conditional <= (2f64.sqrt() / 8.0).powi(2 * r as i32) + TOL);
            }
        }
    }

    #[test]
    fn sample_mode_matches_exact_law() {
        for k in [15u64, 25, 561, 91] {
            let e = Certifier::prepare(k, CertifyParams { p: 8, ..Default::default() }).unwrap();
            let s = Certifier::prepare(
                k,
                CertifyParams {
                    p: 8,
                    mode: Mode::Sample,
                    ..Default::default()
                },
            )
            .unwrap();
            assert!((e.flag_probability() - s.flag_probability()).abs() < TOL);
            assert!((e.joint_allzero() - s.joint_allzero()).abs() < TOL);
            for (a, b) in e.ancilla_distribution().probs().iter().zip(s.ancilla_distribution().probs()) {
                assert!((a - b).abs() < TOL, "k={k}");
            }
            assert!(s.error_budget() <= (2f64.sqrt() / 8.0).powi(4) + 1e-15);
        }
    }

    #[test]
    fn counters_and_determinism() {
        let c = Certifier::prepare(105, CertifyParams { p: 4, r: 1, ..Default::default() }).unwrap();
        for i in 0..50 {
            let v = c.run(9, i);
            assert_eq!(v.grover_applications, 3 * (v.flag_retries + 1));
            assert_eq!(v, c.run(9, i));
        }
        assert_ne!(c.run_many(1, 30), c.run_many(2, 30));
    }

    #[test]
    fn preconditions() {
        assert!(matches!(certify(13, 16, 2, Mode::Exact, 0), Err(Error::Precondition(_))));
        assert!(matches!(certify(15, 3, 2, Mode::Exact, 0), Err(Error::Domain(_))));
        assert!(matches!(certify(15, 16, 0, Mode::Exact, 0), Err(Error::Domain(_))));
        assert!(matches!(certify(1, 16, 2, Mode::Exact, 0), Err(Error::Domain(_))));
        assert!(certify(100_003 * 3, 64, 3, Mode::Exact, 0).unwrap_err().is_capacity());
    }

    #[test]
    fn flag_fractions() {
        assert_eq!(flag_probability(561).unwrap(), FlagProbability { numerator: 320, denominator: 561 });
        assert_eq!(flag_probability(15).unwrap(), FlagProbability { numerator: 8, denominator: 15 });
        assert_eq!(flag_probability(13).unwrap(), FlagProbability { numerator: 12, denominator: 13 });
        assert_eq!(flag_probability(4).unwrap(), FlagProbability { numerator: 1, denominator: 2 });
        let params = CertifyParams { p: 4, r: 1, ..Default::default() };
        for k in [2u64, 13, 97] {
            let sim = Certifier::simulated_flag_probability(k, params).unwrap();
            assert!((sim - (k - 1) as f64 / k as f64).abs() < TOL);
        }
    }

    #[test]
    fn recommended_register() {
        assert_eq!(recommended_p(15, GroverScope::CoprimeBranch).unwrap(), 4);
        // φ(15)/(2·15) = 4/15: θ_min = arcsin √(4/15) ≈ 0.5426.
        assert_eq!(recommended_p(15, GroverScope::FullRegister).unwrap(), 6);
    }

    #[test]
    fn majority() {
        let c = Certifier::prepare(561, CertifyParams { p: 4, r: 1, ..Default::default() }).unwrap();
        assert_eq!(majority_kind(&c.run_many(0, 5)), Some(VerdictKind::ProbablyCarmichael));
        assert_eq!(majority_kind(&[]), None);
    }
}
