//! Exact simulation of Grover-search based Carmichael certification and counting.
//!
//! * [`numtheory`] holds the classical oracles (factorisation, totients, Fermat and
//!   Rabin base counts, Korselt's criterion, Carmichael enumeration).
//! * [`qsim`] is a dense mixed-radix statevector simulator.
//! * [`counting`] is the phase-estimation counting procedure and its closed form.
//! * [`carmichael`] assembles the certification and counting pipelines.

pub mod carmichael;
pub mod counting;
pub mod error;
pub mod numtheory;
pub mod qsim;
pub mod rng;

pub use error::{Error, Result};
pub use carmichael::{CertifyParams, GroverScope, Mode, Verdict, VerdictKind};
pub use counting::CountEstimate;
pub use numtheory::{Classification, Factorization, NumberFacts};
pub use qsim::{Distribution, RegisterLayout, StateVector};
