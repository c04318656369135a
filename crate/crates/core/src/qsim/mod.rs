//! Dense statevector simulation over mixed-radix registers.
//!
//! Registers have arbitrary dimension. Diffusion is the exact reflection about the
//! uniform superposition of a register (the Fourier transform of `|0>`), so no
//! padding to powers of two is involved.

mod distribution;
mod grover;
mod layout;
mod state;

pub use distribution::{Distribution, DUMP_THRESHOLD};
pub use grover::{controlled_grover_powers, controlled_powers, GroverAngles};
pub use layout::{RegisterLayout, DEFAULT_AMPLITUDE_CAP};
pub use state::{StateVector, MIN_POSTSELECT_PROBABILITY, NORM_TOLERANCE};
