use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::layout::RegisterLayout;
use super::state::StateVector;
use crate::error::{Error, Result};

/// Rotation angle of Grover's operator on a `D`-dimensional register with `t`
/// marked values: `sin θ = √(t/D)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GroverAngles {
    pub dimension: u64,
    pub marked: u64,
    pub theta: f64,
}

impl GroverAngles {
    pub fn new(dimension: u64, marked: u64) -> Result<Self> {
        if dimension == 0 || marked > dimension {
            return Err(Error::domain(format!(
                "need 0 <= t <= D and D >= 1, got t = {marked}, D = {dimension}"
            )));
        }
        let theta = match marked {
            0 => 0.0,
            t if t == dimension => PI / 2.0,
            t => (t as f64 / dimension as f64).sqrt().asin(),
        };
        Ok(GroverAngles {
            dimension,
            marked,
            theta,
        })
    }

    /// `f = Pθ/π`, the peak position of the counting spectrum for a `P`-level register.
    pub fn f(&self, p: usize) -> f64 {
        p as f64 * self.theta / PI
    }

    /// Amplitude on each marked basis state after `m` iterations from uniform.
    pub fn marked_amplitude(&self, m: u64) -> f64 {
        if self.marked == 0 {
            return 0.0;
        }
        ((2 * m + 1) as f64 * self.theta).sin() / (self.marked as f64).sqrt()
    }

    /// Amplitude on each unmarked basis state after `m` iterations from uniform.
    pub fn unmarked_amplitude(&self, m: u64) -> f64 {
        let rest = self.dimension - self.marked;
        if rest == 0 {
            return 0.0;
        }
        ((2 * m + 1) as f64 * self.theta).cos() / (rest as f64).sqrt()
    }

    /// `G^m |u>` reconstructed from the two-plane rotation, for a single register.
    pub fn evolved_state(&self, m: u64, marked: impl Fn(usize) -> bool) -> Result<StateVector> {
        let layout = RegisterLayout::new(vec![self.dimension as usize])?;
        let (a, b) = (self.marked_amplitude(m), self.unmarked_amplitude(m));
        let amps = (0..self.dimension as usize)
            .map(|v| Complex64::new(if marked(v) { a } else { b }, 0.0))
            .collect();
        StateVector::from_amplitudes(layout, amps)
    }
}

/// `Σ_m |m_1 .. m_R> ⊗ U^(m_1+..+m_R) |base> / √(Π d_i)` for ancilla registers of
/// sizes `ancilla_dims`, where `step` applies `U` once.
///
/// Each power `U^s` is computed once for `s` up to `Σ (d_i - 1)` and copied into
/// every ancilla branch with that digit sum. Returns the state and the number of
/// `step` applications.
pub fn controlled_powers(
    ancilla_dims: &[usize],
    base: StateVector,
    mut step: impl FnMut(StateVector) -> Result<StateVector>,
) -> Result<(StateVector, usize)> {
    if ancilla_dims.is_empty() {
        return Err(Error::domain("at least one ancilla register is required"));
    }
    let mut dims = ancilla_dims.to_vec();
    dims.extend_from_slice(base.layout().dims());
    let layout = RegisterLayout::new(dims)?;
    let anc = RegisterLayout::new(ancilla_dims.to_vec())?;
    let max_power: usize = ancilla_dims.iter().map(|d| d - 1).sum();

    let mut powers = Vec::with_capacity(max_power + 1);
    let mut current = base;
    for _ in 0..max_power {
        let next = step(current.clone())?;
        powers.push(current);
        current = next;
    }
    powers.push(current);

    let block = powers[0].amplitudes().len();
    let scale = 1.0 / (anc.dimension() as f64).sqrt();
    let mut amps = Vec::with_capacity(layout.dimension());
    for a in 0..anc.dimension() {
        let s: usize = anc.decode(a).iter().sum();
        amps.extend(powers[s].amplitudes().iter().map(|x| x * scale));
    }
    debug_assert_eq!(amps.len(), anc.dimension() * block);
    Ok((StateVector::from_amplitudes(layout, amps)?, max_power))
}

/// `R` ancillas of size `P` controlling powers of Grover's operator on a
/// `D`-dimensional register that starts uniform.
pub fn controlled_grover_powers(
    p: usize,
    r: usize,
    d: usize,
    marked: impl Fn(usize) -> bool,
) -> Result<StateVector> {
    if p < 2 || r < 1 {
        return Err(Error::domain(format!("need P >= 2 and R >= 1, got P = {p}, R = {r}")));
    }
    let mut dims = vec![p; r];
    dims.push(d);
    // Validate the full size before doing any work.
    RegisterLayout::new(dims)?;
    let base = StateVector::uniform(RegisterLayout::new(vec![d])?);
    let mask: Vec<bool> = (0..d).map(marked).collect();
    let (state, _) = controlled_powers(&vec![p; r], base, |s| s.grover_iterate(0, |v| mask[v]))?;
    Ok(state)
}
