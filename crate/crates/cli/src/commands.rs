use std::f64::consts::PI;

use carmichael_core::carmichael::{
    count_carmichaels_quantum, count_nonpseudo_bases, majority_kind, perturbation_budget, psw_check,
    AllZeroReport, CarmichaelCount, CertifyParams, Certifier, GroverScope, Mode, PhiNormReport, PswReport,
    QPolicy, Verdict, VerdictKind,
};
use carmichael_core::counting::{error_bound, CountEstimate};
use carmichael_core::numtheory::{enumerate_carmichaels, NumberFacts};
use carmichael_core::Result;
use serde::Serialize;

use crate::output::{csv_records, csv_table, text_table, Output};

fn factor_string(f: &NumberFacts) -> String {
    f.factorization
        .factors()
        .iter()
        .map(|&(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
        .collect::<Vec<_>>()
        .join("*")
}

pub fn facts(k: u64) -> Result<Output> {
    let f = NumberFacts::compute(k)?;
    let header = ["k", "factorization", "phi", "f_count", "t_k", "mr_witnesses", "classification"];
    let row = vec![
        k.to_string(),
        factor_string(&f),
        f.phi.to_string(),
        f.f_count.to_string(),
        f.t_k.to_string(),
        f.mr_witnesses.to_string(),
        format!("{:?}", f.classification),
    ];
    let text = header
        .iter()
        .zip(&row)
        .map(|(h, v)| format!("{h:<15} {v}\n"))
        .collect();
    Output::new(&f, csv_table(&header, [row]), text)
}

#[derive(Serialize)]
struct CertifyRun<'a> {
    k: u64,
    params: CertifyParams,
    flag_probability: f64,
    /// Present in exact mode only.
    allzero: Option<AllZeroReport>,
    error_budget: f64,
    majority: Option<VerdictKind>,
    probable_votes: usize,
    verdicts: &'a [Verdict],
}

fn joined(xs: &[usize]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn certify(k: u64, p: usize, r: usize, mode: Mode, scope: GroverScope, seed: u64, reps: usize) -> Result<Output> {
    if reps == 0 {
        return Err(carmichael_core::Error::Domain("need at least one repetition".into()));
    }
    let c = Certifier::prepare(k, CertifyParams { p, r, mode, scope })?;
    let verdicts = c.run_many(seed, reps);
    let majority = majority_kind(&verdicts);
    let probable_votes = verdicts
        .iter()
        .filter(|v| v.kind == VerdictKind::ProbablyCarmichael)
        .count();
    let run = CertifyRun {
        k,
        params: c.params(),
        flag_probability: c.flag_probability(),
        allzero: (mode == Mode::Exact).then(|| c.allzero_report()),
        error_budget: c.error_budget(),
        majority,
        probable_votes,
        verdicts: &verdicts,
    };

    let header = ["run", "verdict", "ancillas", "flag_retries", "grover_applications", "error_bound"];
    let rows: Vec<Vec<String>> = verdicts
        .iter()
        .enumerate()
        .map(|(i, v)| {
            vec![
                i.to_string(),
                format!("{:?}", v.kind),
                joined(&v.observed_ancillas),
                v.flag_retries.to_string(),
                v.grover_applications.to_string(),
                v.error_bound.to_string(),
            ]
        })
        .collect();

    let mut text = format!("k = {k}  P = {p}  R = {r}  mode = {mode:?}  scope = {scope:?}  seed = {seed}\n");
    text += &format!("P(flag=1) = {:.10}\n", c.flag_probability());
    if let Some(a) = &run.allzero {
        text += &format!(
            "P(all 0 | flag=1) = {:.12e}  P(all 0) = {:.12e}\n",
            a.conditional, a.joint
        );
    }
    text += &format!("error budget = {:.6e}\n\n", c.error_budget());
    text += &text_table(&header, &rows);
    if let Some(m) = majority {
        text += &format!("\nmajority: {m:?} ({probable_votes}/{reps} ProbablyCarmichael)\n");
    }
    Output::new(&run, csv_table(&header, rows), text)
}

fn estimate_rows(estimates: &[CountEstimate]) -> Vec<Vec<String>> {
    estimates
        .iter()
        .map(|e| {
            vec![
                e.measured_l.to_string(),
                e.f_tilde.to_string(),
                format!("{:.6}", e.theta_tilde),
                format!("{:.6}", e.t_tilde),
                format!("{:.6}", e.error_bound),
                e.in_ansatz.to_string(),
            ]
        })
        .collect()
}

const ESTIMATE_HEADER: [&str; 6] = ["l", "f_tilde", "theta_tilde", "t_tilde", "bound", "in_ansatz"];

#[derive(Serialize)]
struct BaseCountRun<'a> {
    k: u64,
    p: usize,
    t_exact: u64,
    error_bound: f64,
    success_fraction: f64,
    estimates: &'a [CountEstimate],
}

pub fn count_bases(k: u64, p: usize, seed: u64, reps: usize) -> Result<Output> {
    let c = count_nonpseudo_bases(k, p, seed, reps)?;
    let bound = error_bound(k, p, c.t_exact as f64);
    let hits = c.estimates.iter().filter(|e| e.within_bound_of(c.t_exact)).count();
    let run = BaseCountRun {
        k,
        p,
        t_exact: c.t_exact,
        error_bound: bound,
        success_fraction: hits as f64 / reps.max(1) as f64,
        estimates: &c.estimates,
    };
    let rows = estimate_rows(&c.estimates);
    let text = format!(
        "k = {k}  P = {p}  seed = {seed}  reps = {reps}\nt_k = {}  error bound = {bound:.6}\nwithin bound: {hits}/{reps}\n\n{}",
        c.t_exact,
        text_table(&ESTIMATE_HEADER, &rows)
    );
    Output::new(&run, csv_records(&c.estimates), text)
}

#[derive(Serialize)]
struct CarmichaelCountRun<'a> {
    #[serde(flatten)]
    count: &'a CarmichaelCount,
    success_threshold: f64,
}

pub fn count_carmichael(n: u64, q: usize, seed: u64, reps: usize) -> Result<Output> {
    let c = count_carmichaels_quantum(n, q, seed, reps)?;
    let threshold = 8.0 / (PI * PI);
    let rows = estimate_rows(&c.estimates);
    let mut text = format!("N = {n}  Q = {q}  seed = {seed}  reps = {reps}\n");
    text += &format!("t_N = {}  error bound = {:.6}\n", c.t_exact, c.error_bound);
    text += &format!(
        "peak probability = {:.6}  (f = {:.4}, in ansatz: {})\n",
        c.peak.probability, c.peak.f, c.peak.in_ansatz
    );
    text += &format!(
        "success fraction = {:.4}  (8/pi^2 = {threshold:.4})\n\n",
        c.success_fraction
    );
    text += &text_table(&ESTIMATE_HEADER, &rows);
    let run = CarmichaelCountRun {
        count: &c,
        success_threshold: threshold,
    };
    Output::new(&run, csv_records(&c.estimates), text)
}

pub fn psw(n: u64, epsilon: f64, delta: f64, policy: QPolicy, seed: u64, reps: usize) -> Result<Output> {
    let rep: PswReport = psw_check(n, epsilon, delta, policy, seed, reps)?;
    let r = rep.row;
    let text = format!(
        "N = {}  epsilon = {}  delta = {}  Q = {}  (log Q / log l(N) = {:.4})\n\
         l(N) = {:.6}\n\
         t_N = {}  median t~ = {:.4}  success fraction = {:.4}\n\
         |dt|_exp = {:.6}  |dt|_th = {:.6}  exp < th: {}\n\
         density lower = {:.6}  density upper = {:.6}\n\
         nominal query scale l(N)^(2+eps+2delta) = {:.6}\n",
        r.n,
        r.epsilon,
        r.delta,
        r.q,
        rep.q_exponent,
        rep.l_n,
        r.t_n,
        r.t_tilde,
        rep.success_fraction,
        r.dt_exp,
        r.dt_th,
        rep.below_target,
        r.psw_lower,
        r.psw_upper,
        rep.query_scale,
    );
    Output::new(&rep, csv_records([r]), text)
}

#[derive(Serialize)]
struct BoundsSummary {
    n: u64,
    p: usize,
    e_norm_sq: f64,
    e_norm_bound: f64,
    e_norm_within_bound: bool,
    beta_bound: f64,
    primes_have_unit_beta: bool,
    beta_violations: Vec<u64>,
    phi_norm: PhiNormReport,
}

pub fn bounds(n: u64, p: usize) -> Result<Output> {
    let b = perturbation_budget(n, p)?;
    let summary = BoundsSummary {
        n,
        p,
        e_norm_sq: b.e_norm_sq,
        e_norm_bound: b.e_norm_bound,
        e_norm_within_bound: b.e_norm_within_bound(),
        beta_bound: b.beta_bound,
        primes_have_unit_beta: b.primes_have_unit_beta(),
        beta_violations: b.beta_violations(),
        phi_norm: PhiNormReport::compute(n)?,
    };
    let s = &summary;
    let text = format!(
        "N = {n}  P = {p}\n\
         E_norm_sq = {:.6e}  bound 4pi^2/(3P^2) = {:.6e}  within: {}\n\
         beta bound 2/(sqrt(3)P) = {:.6e}  primes beta = 1: {}  composites above bound: {:?}\n\
         mean phi(k)/k = {:.7}  6/pi^2 = {:.7}  pi^2/6 = {:.7}  matches pi^2/6: {}\n",
        s.e_norm_sq,
        s.e_norm_bound,
        s.e_norm_within_bound,
        s.beta_bound,
        s.primes_have_unit_beta,
        s.beta_violations,
        s.phi_norm.value,
        s.phi_norm.six_over_pi_sq,
        s.phi_norm.pi_sq_over_six,
        s.phi_norm.matches_pi_sq_over_six,
    );
    Output::new(&summary, csv_records(&b.rows), text)
}

#[derive(Serialize)]
struct Enumeration<'a> {
    n: u64,
    count: usize,
    carmichaels: &'a [u64],
}

pub fn enumerate(n: u64) -> Result<Output> {
    let cs = enumerate_carmichaels(n)?;
    let mut text = format!("{} Carmichael numbers below {n}\n", cs.len());
    for c in &cs {
        text += &format!("{c}\n");
    }
    let csv = csv_table(&["carmichael"], cs.iter().map(|c| vec![c.to_string()]));
    Output::new(
        &Enumeration {
            n,
            count: cs.len(),
            carmichaels: &cs,
        },
        csv,
        text,
    )
}
