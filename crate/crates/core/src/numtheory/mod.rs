//! Classical number theory: the exact counterparts of every quantity the
//! simulated algorithms estimate.

mod arith;
pub mod census;
mod factor;
mod pseudoprime;
mod psw;

pub use arith::{gcd, is_prime, mod_pow};
pub use factor::{factorize, factorize_bounded, Factorization, DEFAULT_FACTOR_BOUND};
pub use pseudoprime::{
    enumerate_carmichaels, enumerate_carmichaels_bounded, euler_phi, fermat_nonwitness_count,
    g_flag, is_carmichael, mr_witness_count, rabin_witness, totients_up_to, z_flag,
    Classification, NumberFacts, DEFAULT_ENUMERATION_BOUND,
};
pub use psw::{psw_bounds, psw_l, PSW_MIN_N};


