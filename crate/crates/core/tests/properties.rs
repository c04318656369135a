use std::f64::consts::PI;

use carmichael_core::carmichael::{
    allzero_probability, count_nonpseudo_bases, flag_probability, CertifyParams, Certifier, Mode, VerdictKind,
};
use carmichael_core::counting::{
    count_exact_distribution, error_bound, peak_success_probability, s_lp, CountEstimate, Sign,
};
use carmichael_core::numtheory::{census, euler_phi, factorize, is_carmichael, psw_l, NumberFacts};
use carmichael_core::qsim::GroverAngles;
use proptest::prelude::*;

const CARMICHAELS: [u64; 7] = [561, 1105, 1729, 2465, 2821, 6601, 8911];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kernel_bounded(l in 0usize..64, f in 0.0f64..32.0, p in 2usize..64) {
        let l = l % p;
        for sign in [Sign::Plus, Sign::Minus] {
            prop_assert!(s_lp(l, f, p, sign).abs() <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn count_law_is_symmetric_and_normalised(d in 1u64..400, frac in 0.0f64..=1.0, p in 2usize..40) {
        let t = (frac * d as f64).round() as u64;
        let dist = count_exact_distribution(d, t, p).unwrap();
        let total: f64 = dist.probs().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
        for l in 1..p {
            prop_assert!((dist.probs()[l] - dist.probs()[p - l]).abs() < 1e-12);
        }
    }

    #[test]
    fn estimates_stay_in_range(d in 1u64..10_000, p in 2usize..300, l in 0usize..300) {
        let e = CountEstimate::from_outcome(l % p, d, p, None);
        prop_assert!(e.f_tilde >= 0.0 && e.f_tilde <= p as f64 / 2.0);
        prop_assert!(e.t_tilde >= 0.0 && e.t_tilde <= d as f64 * (1.0 + 1e-12));
    }

    #[test]
    fn carmichaels_never_accused(idx in 0usize..3, seed in any::<u64>(), run in 0u64..1000) {
        let k = CARMICHAELS[idx];
        let c = Certifier::prepare(k, CertifyParams { p: 8, r: 1, ..Default::default() }).unwrap();
        let v = c.run(seed, run);
        prop_assert_eq!(v.kind, VerdictKind::ProbablyCarmichael);
        prop_assert_eq!(v.grover_applications, 7 * (v.flag_retries + 1));
    }

    #[test]
    fn flag_rate_is_totient_ratio(k in 2u64..400) {
        let sim = Certifier::simulated_flag_probability(k, CertifyParams { p: 4, r: 1, ..Default::default() }).unwrap();
        prop_assert!((sim - flag_probability(k).unwrap().value()).abs() < 1e-10);
    }

    #[test]
    fn psw_l_increases(a in 100.0f64..1e12, b in 100.0f64..1e12) {
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assert!(psw_l(lo).unwrap() <= psw_l(hi).unwrap());
    }

    #[test]
    fn factorisation_round_trip(k in 2u64..(1 << 40)) {
        let f = factorize(k).unwrap();
        prop_assert_eq!(f.value(), k);
        let phi = euler_phi(&f);
        prop_assert!(phi >= 1 && phi <= k);
    }
}

#[test]
fn peak_estimates_within_bound() {
    for d in 1..=200u64 {
        for t in 0..=d {
            for p in [4usize, 8, 16, 32] {
                let pk = peak_success_probability(d, t, p).unwrap();
                for &l in &pk.outcomes {
                    let e = CountEstimate::from_outcome(l, d, p, Some(t));
                    assert!(e.within_bound_of(t), "d={d} t={t} p={p} l={l}");
                }
            }
        }
    }
}

#[test]
fn peak_mass_in_ansatz() {
    for d in 1..=200u64 {
        for t in 0..=d {
            for p in [8usize, 16, 32] {
                let pk = peak_success_probability(d, t, p).unwrap();
                if pk.in_ansatz {
                    assert!(pk.probability >= 8.0 / (PI * PI) - 1e-12, "d={d} t={t} p={p}");
                }
            }
        }
    }
}

#[test]
fn korselt_matches_definition_below_5000() {
    for k in 2..5000 {
        assert_eq!(is_carmichael(k), census::is_carmichael(k).unwrap(), "k={k}");
    }
}

#[test]
fn certification_examples() {
    let rep = allzero_probability(25, 8, 2).unwrap();
    let facts = NumberFacts::compute(25).unwrap();
    assert_eq!((facts.phi, facts.f_count, facts.t_k), (20, 4, 16));
    assert!(rep.conditional <= (2f64.sqrt() / 8.0).powi(4) + 1e-12);

    for k in [15u64, 21, 91] {
        let r1 = allzero_probability(k, 16, 1).unwrap().conditional;
        let r2 = allzero_probability(k, 16, 2).unwrap().conditional;
        assert!(r2 <= r1 + 1e-15, "k={k}");
    }

    for mode in [Mode::Exact, Mode::Sample] {
        let c = Certifier::prepare(
            1105,
            CertifyParams {
                mode,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(c.run_many(11, 50).iter().all(|v| v.kind == VerdictKind::ProbablyCarmichael));
    }
}

#[test]
fn base_count_examples() {
    let c = count_nonpseudo_bases(15, 16, 4, 300).unwrap();
    let pk = peak_success_probability(15, 4, 16).unwrap();
    let bound = error_bound(15, 16, 4.0);
    for e in c.estimates.iter().filter(|e| pk.outcomes.contains(&e.measured_l)) {
        assert!((e.t_tilde - 4.0).abs() <= bound);
    }
    let c = count_nonpseudo_bases(25, 16, 4, 300).unwrap();
    let pk = peak_success_probability(25, 16, 16).unwrap();
    assert!(c
        .estimates
        .iter()
        .filter(|e| pk.outcomes.contains(&e.measured_l))
        .all(|e| e.within_bound_of(16)));
    let theta = GroverAngles::new(25, 16).unwrap().theta;
    assert!((theta - 0.8f64.asin()).abs() < 1e-15);
}
