use rand::Rng as _;
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

use super::state::NORM_TOLERANCE;
use crate::error::{Error, Result};
use crate::rng::Rng;

/// Probabilities at or below this are left out of serialised dumps.
pub const DUMP_THRESHOLD: f64 = 1e-12;

/// Exact joint distribution over a few registers, flattened mixed-radix
/// (first register most significant).
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    dims: Vec<usize>,
    probs: Vec<f64>,
}

impl Distribution {
    pub fn new(dims: Vec<usize>, probs: Vec<f64>) -> Result<Self> {
        let size: usize = dims.iter().product();
        if size != probs.len() {
            return Err(Error::domain(format!("{} probabilities for {size} outcomes", probs.len())));
        }
        if probs.iter().any(|&p| !(p >= 0.0)) {
            return Err(Error::domain("negative or NaN probability"));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NormDrift(total, "distribution"));
        }
        Ok(Distribution { dims, probs })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn decode(&self, mut flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for (slot, &d) in out.iter_mut().zip(&self.dims).rev() {
            *slot = flat % d;
            flat /= d;
        }
        out
    }

    pub fn prob(&self, values: &[usize]) -> Result<f64> {
        if values.len() != self.dims.len() || values.iter().zip(&self.dims).any(|(v, d)| v >= d) {
            return Err(Error::domain(format!("outcome {values:?} outside {:?}", self.dims)));
        }
        let flat = values.iter().zip(&self.dims).fold(0, |acc, (v, d)| acc * d + v);
        Ok(self.probs[flat])
    }

    /// One draw by inversion of the cumulative distribution.
    pub fn sample_flat(&self, rng: &mut Rng) -> usize {
        let u: f64 = rng.gen::<f64>() * self.probs.iter().sum::<f64>();
        let mut acc = 0.0;
        let mut last = 0;
        for (i, &p) in self.probs.iter().enumerate() {
            if p > 0.0 {
                acc += p;
                last = i;
                if u < acc {
                    return i;
                }
            }
        }
        last
    }

    pub fn sample(&self, rng: &mut Rng) -> Vec<usize> {
        self.decode(self.sample_flat(rng))
    }
}

struct Entry<'a>(Vec<usize>, &'a f64);

impl Serialize for Entry<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("index", &self.0)?;
        m.serialize_entry("p", self.1)?;
        m.end()
    }
}

struct Entries<'a>(&'a Distribution);

impl Serialize for Entries<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let d = self.0;
        let mut seq = s.serialize_seq(None)?;
        for (i, p) in d.probs.iter().enumerate().filter(|(_, &p)| p > DUMP_THRESHOLD) {
            seq.serialize_element(&Entry(d.decode(i), p))?;
        }
        seq.end()
    }
}

/// `{"layout": [dims...], "probs": [{"index": [...], "p": x}, ...]}`, with
/// register values most significant first and only `p > 1e-12` listed.
impl Serialize for Distribution {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("layout", &self.dims)?;
        m.serialize_entry("probs", &Entries(self))?;
        m.end()
    }
}
