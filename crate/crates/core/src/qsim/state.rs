use num_complex::Complex64;
use rustfft::FftPlanner;

use super::distribution::Distribution;
use super::layout::{Fibers, RegisterLayout};
use crate::error::{Error, Result};

/// Allowed drift of the squared norm away from one after any operation.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Post-selecting an outcome below this probability is an error.
pub const MIN_POSTSELECT_PROBABILITY: f64 = 1e-15;

/// Dense amplitude vector over a [`RegisterLayout`].
///
/// Operations consume the state and hand back the transformed one, so callers
/// never observe a half-updated vector. Every operation re-checks the norm.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    layout: RegisterLayout,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Every amplitude equal to `1/√D`.
    pub fn uniform(layout: RegisterLayout) -> Self {
        let d = layout.dimension();
        let a = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
        StateVector {
            amps: vec![a; d],
            layout,
        }
    }

    /// The computational basis state `|v_0 v_1 ...>`.
    pub fn basis(layout: RegisterLayout, values: &[usize]) -> Result<Self> {
        let idx = layout.flat_index(values)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); layout.dimension()];
        amps[idx] = Complex64::new(1.0, 0.0);
        Ok(StateVector { layout, amps })
    }

    pub fn from_amplitudes(layout: RegisterLayout, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != layout.dimension() {
            return Err(Error::domain(format!(
                "{} amplitudes for a layout of dimension {}",
                amps.len(),
                layout.dimension()
            )));
        }
        StateVector { layout, amps }.checked("construction")
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, values: &[usize]) -> Result<Complex64> {
        Ok(self.amps[self.layout.flat_index(values)?])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Largest componentwise distance to another state of the same layout.
    pub fn max_abs_diff(&self, other: &StateVector) -> f64 {
        assert_eq!(self.layout, other.layout, "layouts differ");
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn checked(self, op: &'static str) -> Result<Self> {
        let n = self.norm_sqr();
        if (n - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NormDrift(n, op));
        }
        Ok(self)
    }

    fn mask(fibers: Fibers, pred: impl Fn(usize) -> bool) -> Vec<bool> {
        (0..fibers.dim).map(pred).collect()
    }

    /// Negates every amplitude whose value in `register` satisfies `marked`.
    pub fn phase_flip(mut self, register: usize, marked: impl Fn(usize) -> bool) -> Result<Self> {
        let f = self.layout.fibers(register)?;
        let mask = Self::mask(f, marked);
        for (block, _) in self
            .amps
            .chunks_exact_mut(f.inner)
            .enumerate()
            .map(|(b, chunk)| (chunk, b))
            .filter(|&(_, b)| mask[b % f.dim])
        {
            for a in block {
                *a = -*a;
            }
        }
        self.checked("phase_flip")
    }

    /// Reflection `2|u><u| - I` about the uniform state of `register`, applied
    /// independently for every setting of the other registers.
    pub fn diffusion(self, register: usize) -> Result<Self> {
        self.diffusion_within(register, |_| true)
    }

    /// Reflection about the uniform superposition of the register values in
    /// `support`; amplitudes on values outside the support are left untouched.
    pub fn diffusion_within(mut self, register: usize, support: impl Fn(usize) -> bool) -> Result<Self> {
        let f = self.layout.fibers(register)?;
        let mask = Self::mask(f, support);
        let size = mask.iter().filter(|&&m| m).count();
        if size > 0 {
            let scale = 2.0 / size as f64;
            let mut sums = vec![Complex64::new(0.0, 0.0); f.inner];
            for group in self.amps.chunks_exact_mut(f.dim * f.inner) {
                sums.iter_mut().for_each(|s| *s = Complex64::new(0.0, 0.0));
                for (j, block) in group.chunks_exact(f.inner).enumerate() {
                    if mask[j] {
                        for (s, a) in sums.iter_mut().zip(block) {
                            *s += a;
                        }
                    }
                }
                for s in sums.iter_mut() {
                    *s *= scale;
                }
                for (j, block) in group.chunks_exact_mut(f.inner).enumerate() {
                    if mask[j] {
                        for (a, s) in block.iter_mut().zip(&sums) {
                            *a = s - *a;
                        }
                    }
                }
            }
        }
        self.checked("diffusion")
    }

    /// One Grover step: phase flip on `marked`, then diffusion on the same register.
    pub fn grover_iterate(self, register: usize, marked: impl Fn(usize) -> bool) -> Result<Self> {
        self.phase_flip(register, marked)?.diffusion(register)
    }

    /// Grover step whose diffusion reflects about the uniform state of `support` only.
    pub fn grover_iterate_within(
        self,
        register: usize,
        marked: impl Fn(usize) -> bool,
        support: impl Fn(usize) -> bool,
    ) -> Result<Self> {
        self.phase_flip(register, marked)?
            .diffusion_within(register, support)
    }

    /// `|a> -> Σ_b e^{2πi ab/P} |b> / √P` on `register`.
    pub fn qft(self, register: usize) -> Result<Self> {
        self.fourier(register, false)
    }

    pub fn inverse_qft(self, register: usize) -> Result<Self> {
        self.fourier(register, true)
    }

    fn fourier(mut self, register: usize, inverse: bool) -> Result<Self> {
        let f = self.layout.fibers(register)?;
        if f.dim > 1 {
            let mut planner = FftPlanner::<f64>::new();
            // rustfft's "inverse" carries the positive exponent.
            let fft = if inverse {
                planner.plan_fft_forward(f.dim)
            } else {
                planner.plan_fft_inverse(f.dim)
            };
            let scale = 1.0 / (f.dim as f64).sqrt();
            if f.inner == 1 {
                fft.process(&mut self.amps);
            } else {
                let mut scratch = vec![Complex64::new(0.0, 0.0); f.dim * f.inner];
                for group in self.amps.chunks_exact_mut(f.dim * f.inner) {
                    for j in 0..f.dim {
                        for i in 0..f.inner {
                            scratch[i * f.dim + j] = group[j * f.inner + i];
                        }
                    }
                    fft.process(&mut scratch);
                    for j in 0..f.dim {
                        for i in 0..f.inner {
                            group[j * f.inner + i] = scratch[i * f.dim + j];
                        }
                    }
                }
            }
            for a in self.amps.iter_mut() {
                *a *= scale;
            }
        }
        self.checked(if inverse { "inverse_qft" } else { "qft" })
    }

    /// Permutation `|c>|v> -> |c>|v + 1 mod d>` on `target` wherever `control`'s value
    /// satisfies `pred`. With a two-level target starting in `|0>` this writes a flag bit.
    pub fn controlled_increment(
        self,
        control: usize,
        target: usize,
        pred: impl Fn(usize) -> bool,
    ) -> Result<Self> {
        let c = self.layout.fibers(control)?;
        let t = self.layout.fibers(target)?;
        if control == target {
            return Err(Error::domain("control and target registers must differ"));
        }
        let mask = Self::mask(c, pred);
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (idx, &a) in self.amps.iter().enumerate() {
            let cv = (idx / c.inner) % c.dim;
            let dest = if mask[cv] {
                let tv = (idx / t.inner) % t.dim;
                let nv = (tv + 1) % t.dim;
                idx + nv * t.inner - tv * t.inner
            } else {
                idx
            };
            out[dest] = a;
        }
        StateVector {
            layout: self.layout,
            amps: out,
        }
        .checked("controlled_increment")
    }

    /// Tensor with a fresh register of dimension `dim` in `|0>`, appended last.
    pub fn with_register(self, dim: usize) -> Result<Self> {
        let layout = self.layout.appended(dim)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); layout.dimension()];
        for (i, a) in self.amps.into_iter().enumerate() {
            amps[i * dim] = a;
        }
        StateVector { layout, amps }.checked("with_register")
    }

    /// Conditions on `register == value`: returns the renormalised state and the
    /// probability of that outcome.
    pub fn postselect(mut self, register: usize, value: usize) -> Result<(Self, f64)> {
        let f = self.layout.fibers(register)?;
        if value >= f.dim {
            return Err(Error::domain(format!(
                "value {value} out of range for register {register} (dim {})",
                f.dim
            )));
        }
        let prob: f64 = self
            .amps
            .chunks_exact(f.inner)
            .enumerate()
            .filter(|(b, _)| b % f.dim == value)
            .flat_map(|(_, block)| block.iter().map(|a| a.norm_sqr()))
            .sum();
        if prob < MIN_POSTSELECT_PROBABILITY {
            return Err(Error::ZeroProbability(prob));
        }
        let scale = 1.0 / prob.sqrt();
        for (b, block) in self.amps.chunks_exact_mut(f.inner).enumerate() {
            let keep = b % f.dim == value;
            for a in block {
                *a = if keep { *a * scale } else { Complex64::new(0.0, 0.0) };
            }
        }
        Ok((self.checked("postselect")?, prob))
    }

    /// Exact marginal distribution of the listed registers, in the listed order.
    pub fn exact_distribution(&self, registers: &[usize]) -> Result<Distribution> {
        let mut fibers = Vec::with_capacity(registers.len());
        for (i, &r) in registers.iter().enumerate() {
            if registers[..i].contains(&r) {
                return Err(Error::domain(format!("register {r} listed twice")));
            }
            fibers.push(self.layout.fibers(r)?);
        }
        let dims: Vec<usize> = fibers.iter().map(|f| f.dim).collect();
        let mut probs = vec![0.0; dims.iter().product()];
        for (idx, a) in self.amps.iter().enumerate() {
            let sub = fibers
                .iter()
                .fold(0, |acc, f| acc * f.dim + (idx / f.inner) % f.dim);
            probs[sub] += a.norm_sqr();
        }
        Distribution::new(dims, probs)
    }

    /// `n_samples` seeded draws of the listed registers' joint value.
    pub fn sample(&self, registers: &[usize], seed: u64, n_samples: usize) -> Result<Vec<Vec<usize>>> {
        if n_samples == 0 {
            return Err(Error::domain("n_samples must be at least 1"));
        }
        let dist = self.exact_distribution(registers)?;
        let mut rng = crate::rng::run_rng(seed, 0);
        Ok((0..n_samples).map(|_| dist.sample(&mut rng)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    const TOL: f64 = 1e-12;

    fn layout(dims: &[usize]) -> RegisterLayout {
        RegisterLayout::new(dims.to_vec()).unwrap()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn random_state(dims: &[usize], seed: u64) -> StateVector {
        use rand::Rng;
        let mut rng = crate::rng::run_rng(seed, 0);
        let l = layout(dims);
        let mut amps: Vec<Complex64> = (0..l.dimension())
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        let n = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        amps.iter_mut().for_each(|a| *a /= n);
        StateVector::from_amplitudes(l, amps).unwrap()
    }

    /// Naive DFT matrix applied fibre by fibre; independent of rustfft.
    fn naive_dft(state: &StateVector, register: usize, sign: f64) -> Vec<Complex64> {
        let l = state.layout();
        let f = l.fibers(register).unwrap();
        let mut out = vec![Complex64::new(0.0, 0.0); l.dimension()];
        for o in 0..l.dimension() / (f.dim * f.inner) {
            for i in 0..f.inner {
                for b in 0..f.dim {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for a in 0..f.dim {
                        let ph = sign * 2.0 * PI * (a * b) as f64 / f.dim as f64;
                        acc += state.amps[(o * f.dim + a) * f.inner + i] * Complex64::from_polar(1.0, ph);
                    }
                    out[(o * f.dim + b) * f.inner + i] = acc / (f.dim as f64).sqrt();
                }
            }
        }
        out
    }

    #[test]
    fn uniform_examples() {
        let s = StateVector::uniform(layout(&[1]));
        assert_eq!(s.amplitudes(), &[c(1.0)]);
        let s = StateVector::uniform(layout(&[4]));
        assert!(s.amplitudes().iter().all(|a| (a - c(0.5)).norm() < TOL));
        assert!((StateVector::uniform(layout(&[561])).norm_sqr() - 1.0).abs() < TOL);
    }

    #[test]
    fn phase_flip_examples() {
        let u = StateVector::uniform(layout(&[4]));
        assert_eq!(u.clone().phase_flip(0, |_| false).unwrap(), u);
        let all = u.clone().phase_flip(0, |_| true).unwrap();
        assert!(all.amplitudes().iter().all(|a| (a + c(0.5)).norm() < TOL));
        let one = u.phase_flip(0, |v| v == 3).unwrap();
        let expected = [0.5, 0.5, 0.5, -0.5].map(c);
        assert!(one.amplitudes().iter().zip(&expected).all(|(a, b)| (a - b).norm() < TOL));
        let bad = StateVector::uniform(layout(&[4])).phase_flip(1, |_| true);
        assert!(matches!(bad, Err(Error::RegisterOutOfRange { index: 1, registers: 1 })));
    }

    #[test]
    fn diffusion_examples() {
        let u = StateVector::uniform(layout(&[7, 3]));
        assert!(u.clone().diffusion(0).unwrap().max_abs_diff(&u) < TOL);
        assert!(u.clone().diffusion(1).unwrap().max_abs_diff(&u) < TOL);
        let s = StateVector::basis(layout(&[2]), &[0]).unwrap().diffusion(0).unwrap();
        assert!((s.amplitudes()[0]).norm() < TOL);
        assert!((s.amplitudes()[1] - c(1.0)).norm() < TOL);
        assert!(StateVector::uniform(layout(&[2])).diffusion(2).is_err());
    }

    #[test]
    fn diffusion_acts_per_fibre() {
        // Register 1 diffused in a 2x3 product: each row reflected about its own mean.
        let l = layout(&[2, 3]);
        let amps = [1.0, 2.0, 0.0, 0.0, 0.0, 3.0].map(|x| c(x / 14f64.sqrt()));
        let s = StateVector::from_amplitudes(l, amps.to_vec()).unwrap().diffusion(1).unwrap();
        let want = [1.0, 0.0, 2.0, 2.0, 2.0, -1.0].map(|x| c(x / 14f64.sqrt()));
        assert!(s.amplitudes().iter().zip(&want).all(|(a, b)| (a - b).norm() < TOL));
    }

    #[test]
    fn diffusion_within_support() {
        // Support {0, 2}: values 1 and 3 untouched.
        let l = layout(&[4]);
        let amps = [0.6, 0.0, 0.0, 0.8].map(c);
        let s = StateVector::from_amplitudes(l, amps.to_vec())
            .unwrap()
            .diffusion_within(0, |v| v % 2 == 0)
            .unwrap();
        let want = [0.0, 0.0, 0.6, 0.8].map(c);
        assert!(s.amplitudes().iter().zip(&want).all(|(a, b)| (a - b).norm() < TOL));
    }

    #[test]
    fn grover_exact_search_d4() {
        let s = StateVector::uniform(layout(&[4])).grover_iterate(0, |v| v == 2).unwrap();
        assert!((s.amplitudes()[2] - c(1.0)).norm() < 1e-12);
    }

    #[test]
    fn grover_identity_without_marks() {
        let u = StateVector::uniform(layout(&[15]));
        assert!(u.clone().grover_iterate(0, |_| false).unwrap().max_abs_diff(&u) < TOL);
    }

    #[test]
    fn qft_examples() {
        let zero = StateVector::basis(layout(&[6]), &[0]).unwrap().qft(0).unwrap();
        assert!(zero.max_abs_diff(&StateVector::uniform(layout(&[6]))) < TOL);
        let h = 1.0 / 2f64.sqrt();
        let one = StateVector::basis(layout(&[2]), &[1]).unwrap().qft(0).unwrap();
        assert!((one.amplitudes()[0] - c(h)).norm() < TOL);
        assert!((one.amplitudes()[1] - c(-h)).norm() < TOL);
    }

    #[test]
    fn qft_matches_naive_dft_on_every_register() {
        let s = random_state(&[3, 5, 4], 7);
        for r in 0..3 {
            let fast = s.clone().qft(r).unwrap();
            let slow = naive_dft(&s, r, 1.0);
            let err = fast.amplitudes().iter().zip(&slow).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            assert!(err < 1e-12, "register {r}: {err}");
            let inv = s.clone().inverse_qft(r).unwrap();
            let slow = naive_dft(&s, r, -1.0);
            let err = inv.amplitudes().iter().zip(&slow).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            assert!(err < 1e-12);
        }
    }

    #[test]
    fn qft_squared_is_index_reversal() {
        let p = 7;
        for a in 0..p {
            let s = StateVector::basis(layout(&[p]), &[a]).unwrap().qft(0).unwrap().qft(0).unwrap();
            let want = StateVector::basis(layout(&[p]), &[(p - a) % p]).unwrap();
            assert!(s.max_abs_diff(&want) < 1e-12);
        }
    }

    #[test]
    fn flag_and_postselect() {
        let k = 561usize;
        let s = StateVector::uniform(layout(&[k]))
            .with_register(2)
            .unwrap()
            .controlled_increment(0, 1, |a| crate::numtheory::g_flag(k as u64, a as u64))
            .unwrap();
        let (cond, p) = s.postselect(1, 1).unwrap();
        assert!((p - 320.0 / 561.0).abs() < 1e-12);
        assert!((cond.norm_sqr() - 1.0).abs() < 1e-12);
        let (_, p) = StateVector::uniform(layout(&[2])).postselect(0, 1).unwrap();
        assert!((p - 0.5).abs() < TOL);
        let b = StateVector::basis(layout(&[3, 2]), &[1, 1]).unwrap();
        let (same, p) = b.clone().postselect(1, 1).unwrap();
        assert_eq!(p, 1.0);
        assert_eq!(same, b);
        assert!(matches!(b.clone().postselect(1, 0), Err(Error::ZeroProbability(_))));
        assert!(b.postselect(1, 2).is_err());
    }

    #[test]
    fn controlled_increment_wraps() {
        let s = StateVector::basis(layout(&[2, 3]), &[1, 2]).unwrap();
        let s = s.controlled_increment(0, 1, |c| c == 1).unwrap();
        assert_eq!(s.amplitude(&[1, 0]).unwrap(), c(1.0));
        assert!(s.controlled_increment(1, 1, |_| true).is_err());
    }

    #[test]
    fn distributions() {
        let d = StateVector::uniform(layout(&[4])).exact_distribution(&[0]).unwrap();
        assert!(d.probs().iter().all(|&p| (p - 0.25).abs() < TOL));
        // Product of |+> on a 2-level register and |2> on a 3-level register.
        let l = layout(&[2, 3]);
        let h = 1.0 / 2f64.sqrt();
        let amps = [0.0, 0.0, h, 0.0, 0.0, h].map(c);
        let s = StateVector::from_amplitudes(l, amps.to_vec()).unwrap();
        let joint = s.exact_distribution(&[1, 0]).unwrap();
        let a = s.exact_distribution(&[0]).unwrap();
        let b = s.exact_distribution(&[1]).unwrap();
        for x in 0..3 {
            for y in 0..2 {
                let pj = joint.prob(&[x, y]).unwrap();
                assert!((pj - b.probs()[x] * a.probs()[y]).abs() < TOL);
            }
        }
        assert!(s.exact_distribution(&[0, 0]).is_err());
        assert!(s.exact_distribution(&[2]).is_err());
    }

    #[test]
    fn sampling_is_seeded() {
        let s = StateVector::basis(layout(&[5]), &[3]).unwrap();
        assert!(s.sample(&[0], 1, 50).unwrap().iter().all(|v| v == &[3]));
        let u = StateVector::uniform(layout(&[5, 2]));
        assert_eq!(u.sample(&[0, 1], 9, 100).unwrap(), u.sample(&[0, 1], 9, 100).unwrap());
        assert_ne!(u.sample(&[0, 1], 9, 100).unwrap(), u.sample(&[0, 1], 10, 100).unwrap());
        assert!(u.sample(&[0], 9, 0).is_err());
    }

    #[test]
    fn norm_drift_is_reported() {
        let l = layout(&[2]);
        assert!(matches!(
            StateVector::from_amplitudes(l, vec![c(1.0), c(1.0)]),
            Err(Error::NormDrift(..))
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn operations_are_unitary(seed in any::<u64>(), d0 in 1usize..6, d1 in 1usize..40, mark in any::<u64>()) {
            let s = random_state(&[d0, d1], seed);
            let marked = move |v: usize| (mark >> (v % 64)) & 1 == 1;
            for r in 0..2 {
                for out in [
                    s.clone().phase_flip(r, marked).unwrap(),
                    s.clone().diffusion(r).unwrap(),
                    s.clone().diffusion_within(r, |v| v % 3 != 1).unwrap(),
                    s.clone().grover_iterate(r, marked).unwrap(),
                    s.clone().qft(r).unwrap(),
                    s.clone().inverse_qft(r).unwrap(),
                ] {
                    prop_assert!((out.norm_sqr() - 1.0).abs() < NORM_TOLERANCE);
                }
            }
        }

        #[test]
        fn diffusion_norm_preserved_d561(seed in any::<u64>()) {
            let s = random_state(&[561], seed);
            let out = s.diffusion(0).unwrap();
            prop_assert!((out.norm_sqr() - 1.0).abs() < NORM_TOLERANCE);
        }

        #[test]
        fn qft_round_trip(seed in any::<u64>(), p in 2usize..33) {
            let s = random_state(&[p, 3], seed);
            let back = s.clone().qft(0).unwrap().inverse_qft(0).unwrap();
            prop_assert!(back.max_abs_diff(&s) < 1e-12);
        }
    }
}
