use super::Complex64;
use crate::{Error, Result};
use alloc::vec;
use alloc::vec::Vec;
#[cfg_attr(test, allow(unused_imports))] // inherent f64 methods win when std is linked
use num_traits::Float;

/// Dense complex column vector, length at least 1.
#[derive(Debug, Clone, PartialEq)]
pub struct CVec {
    data: Vec<Complex64>,
}

impl CVec {
    pub fn new(data: Vec<Complex64>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::InvalidDimension {
                what: "vector length",
                got: 0,
            });
        }
        Ok(CVec { data })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(vec![Complex64::ZERO; n])
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize) -> Complex64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDimension {
                what: "vector length",
                got: 0,
            });
        }
        Ok(CVec {
            data: (0..n).map(&mut f).collect(),
        })
    }

    /// Standard basis vector `e_i`.
    pub fn basis(n: usize, i: usize) -> Result<Self> {
        let mut v = Self::zeros(n)?;
        if i >= n {
            return Err(Error::InvalidDimension {
                what: "basis index",
                got: i,
            });
        }
        v.data[i] = Complex64::ONE;
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    /// Vectors are never empty by construction.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Complex64> {
        self.data.iter()
    }

    pub fn norm_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Hermitian inner product `self* other` (conjugates `self`).
    pub fn dot(&self, other: &CVec) -> Result<Complex64> {
        if self.len() != other.len() {
            return Err(Error::DimMismatch {
                op: "dot",
                left: (self.len(), 1),
                right: (other.len(), 1),
            });
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn normalized(&self) -> Result<CVec> {
        let n = self.norm();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::Degenerate {
                what: "vector norm in normalization",
            });
        }
        Ok(self.scale_re(1.0 / n))
    }

    pub fn conj(&self) -> CVec {
        CVec {
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> CVec {
        CVec {
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn scale_re(&self, c: f64) -> CVec {
        CVec {
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn add(&self, other: &CVec) -> Result<CVec> {
        if self.len() != other.len() {
            return Err(Error::DimMismatch {
                op: "add",
                left: (self.len(), 1),
                right: (other.len(), 1),
            });
        }
        Ok(CVec {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &CVec) -> Result<CVec> {
        if self.len() != other.len() {
            return Err(Error::DimMismatch {
                op: "sub",
                left: (self.len(), 1),
                right: (other.len(), 1),
            });
        }
        Ok(CVec {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn add_assign(&mut self, other: &CVec) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::DimMismatch {
                op: "add_assign",
                left: (self.len(), 1),
                right: (other.len(), 1),
            });
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl core::ops::Index<usize> for CVec {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.data[i]
    }
}
