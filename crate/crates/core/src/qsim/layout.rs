use serde::Serialize;

use crate::error::{Error, Result};

/// Default cap on the number of amplitudes in one state (2^26, 1 GiB of `Complex64`).
pub const DEFAULT_AMPLITUDE_CAP: usize = 1 << 26;

/// Mixed-radix register layout, most significant register first:
/// `flat = ((v_0 * d_1 + v_1) * d_2 + v_2) ...`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegisterLayout {
    dims: Vec<usize>,
    #[serde(skip)]
    total: usize,
}

/// Geometry of one register inside a layout: `flat = (outer * dim + value) * inner + rest`,
/// with `outer` ranging over `total / (dim * inner)` values.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Fibers {
    pub dim: usize,
    pub inner: usize,
}

impl RegisterLayout {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        Self::with_cap(dims, DEFAULT_AMPLITUDE_CAP)
    }

    pub fn with_cap(dims: Vec<usize>, cap: usize) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::domain("a layout needs at least one register"));
        }
        if let Some(i) = dims.iter().position(|&d| d == 0) {
            return Err(Error::domain(format!("register {i} has dimension 0")));
        }
        let mut total: u128 = 1;
        for &d in &dims {
            total = total.saturating_mul(d as u128);
        }
        if total > cap as u128 {
            return Err(Error::Capacity {
                what: "state dimension",
                requested: total,
                limit: cap as u128,
            });
        }
        Ok(RegisterLayout {
            dims,
            total: total as usize,
        })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Total dimension `D = Π dims`.
    pub fn dimension(&self) -> usize {
        self.total
    }

    pub fn num_registers(&self) -> usize {
        self.dims.len()
    }

    pub fn flat_index(&self, values: &[usize]) -> Result<usize> {
        if values.len() != self.dims.len() {
            return Err(Error::domain(format!(
                "expected {} register values, got {}",
                self.dims.len(),
                values.len()
            )));
        }
        let mut flat = 0;
        for (i, (&v, &d)) in values.iter().zip(&self.dims).enumerate() {
            if v >= d {
                return Err(Error::domain(format!("value {v} out of range for register {i} (dim {d})")));
            }
            flat = flat * d + v;
        }
        Ok(flat)
    }

    pub fn decode(&self, mut flat: usize) -> Vec<usize> {
        let mut values = vec![0; self.dims.len()];
        for (slot, &d) in values.iter_mut().zip(&self.dims).rev() {
            *slot = flat % d;
            flat /= d;
        }
        values
    }

    /// A copy of this layout with one more register appended (least significant).
    pub fn appended(&self, dim: usize) -> Result<Self> {
        let mut dims = self.dims.clone();
        dims.push(dim);
        RegisterLayout::new(dims)
    }

    pub(crate) fn check_register(&self, index: usize) -> Result<()> {
        if index >= self.dims.len() {
            return Err(Error::RegisterOutOfRange {
                index,
                registers: self.dims.len(),
            });
        }
        Ok(())
    }

    pub(crate) fn fibers(&self, index: usize) -> Result<Fibers> {
        self.check_register(index)?;
        Ok(Fibers {
            dim: self.dims[index],
            inner: self.dims[index + 1..].iter().product(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_radix_round_trip() {
        let layout = RegisterLayout::new(vec![3, 5, 2]).unwrap();
        assert_eq!(layout.dimension(), 30);
        assert_eq!(layout.flat_index(&[1, 2, 1]).unwrap(), (5 + 2) * 2 + 1);
        for flat in 0..30 {
            assert_eq!(layout.flat_index(&layout.decode(flat)).unwrap(), flat);
        }
        assert!(layout.flat_index(&[3, 0, 0]).is_err());
        assert!(layout.flat_index(&[0, 0]).is_err());
    }

    #[test]
    fn invalid_layouts() {
        assert!(RegisterLayout::new(vec![]).is_err());
        assert!(RegisterLayout::new(vec![4, 0]).is_err());
        assert!(RegisterLayout::new(vec![1 << 14, 1 << 13]).unwrap_err().is_capacity());
        assert!(RegisterLayout::with_cap(vec![10, 10], 99).unwrap_err().is_capacity());
        assert!(RegisterLayout::new(vec![usize::MAX, usize::MAX]).unwrap_err().is_capacity());
        assert_eq!(RegisterLayout::new(vec![1]).unwrap().dimension(), 1);
    }
}
