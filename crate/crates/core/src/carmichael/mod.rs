//! Carmichael certification of a single composite and Carmichael counting below a bound.
//!
//! # Flag placement
//!
//! The coprime flag `g(a) = [gcd(a, k) = 1]` is written into a two-level register
//! before any Grover step, and each step reflects only inside the coprime branch:
//! the phase flip marks `{a : gcd(a, k) = 1, a^(k-1) != 1 mod k}` and the diffusion
//! reflects about the uniform state over coprime `a`. Non-coprime amplitudes are
//! untouched. Conditioned on `flag = 1` this is ordinary Grover search on a
//! `φ(k)`-dimensional register with `t_k` marked values, so
//!
//! * `P(flag = 1) = φ(k)/k` exactly,
//! * Carmichael `k` (`t_k = 0`) leave every ancilla in `|0>` after the Fourier step,
//! * otherwise `P(all ancillas 0 | flag = 1) = α^(2R)` with `sin²θ = t_k/φ(k) >= 1/2`.
//!
//! [`GroverScope::FullRegister`] keeps the alternative (Grover over all of `[0, k)`,
//! flag computed afterwards) for comparison. There the unconditioned all-zero
//! probability is `α^(2R)` with `sin²θ = t_k/k`, but neither the flag rate nor the
//! conditional all-zero probability has a clean form.

mod budget;
mod certify;
mod survey;

pub use budget::{
    perturbation_budget, phi_norm, BaseLeakage, PerturbationBudget, PhiNormReport,
    PERTURBATION_BUDGET_LIMIT,
};
pub use certify::{
    allzero_probability, allzero_probability_with, certify, flag_probability, leakage,
    majority_kind, recommended_p, AllZeroReport, CertifyParams, Certifier, FlagProbability,
    GroverScope, Mode, Verdict, VerdictKind,
};
pub use survey::{
    count_carmichaels_quantum, count_nonpseudo_bases, psw_check, BaseCount, CarmichaelCount,
    PswReport, PswRow, QPolicy, DEFAULT_Q_MARGIN,
};
