use super::{CVec, Complex64};
use crate::{Error, Result};
use alloc::vec;
use alloc::vec::Vec;
#[cfg_attr(test, allow(unused_imports))] // inherent f64 methods win when std is linked
use num_traits::Float;

/// Dense complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMat {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidDimension {
                what: "matrix dimension",
                got: rows.min(cols),
            });
        }
        if data.len() != rows * cols {
            return Err(Error::DimMismatch {
                op: "CMat::new",
                left: (rows, cols),
                right: (data.len(), 1),
            });
        }
        Ok(CMat { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Self::new(rows, cols, vec![Complex64::ZERO; rows.saturating_mul(cols)])
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m.data[i * n + i] = Complex64::ONE;
        }
        Ok(m)
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Complex64,
    ) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidDimension {
                what: "matrix dimension",
                got: rows.min(cols),
            });
        }
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Ok(CMat { rows, cols, data })
    }

    /// Real diagonal matrix from the given gains.
    pub fn diag_re(gains: &[f64]) -> Result<Self> {
        let n = gains.len();
        let mut m = Self::zeros(n, n)?;
        for (i, &g) in gains.iter().enumerate() {
            m.data[i * n + i] = Complex64::new(g, 0.0);
        }
        Ok(m)
    }

    /// Matrix of beam columns.
    pub fn from_cols(cols: &[CVec]) -> Result<Self> {
        let nc = cols.len();
        if nc == 0 {
            return Err(Error::InvalidDimension {
                what: "column count",
                got: 0,
            });
        }
        let nr = cols[0].len();
        Self::from_fn(nr, nc, |r, c| cols[c][r])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn col(&self, c: usize) -> Result<CVec> {
        if c >= self.cols {
            return Err(Error::InvalidDimension {
                what: "column index",
                got: c,
            });
        }
        CVec::from_fn(self.rows, |r| self.get(r, c))
    }

    pub fn matmul(&self, rhs: &CMat) -> Result<CMat> {
        if self.cols != rhs.rows {
            return Err(Error::DimMismatch {
                op: "matmul",
                left: (self.rows, self.cols),
                right: (rhs.rows, rhs.cols),
            });
        }
        let mut out = CMat::zeros(self.rows, rhs.cols)?;
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == Complex64::ZERO {
                    continue;
                }
                let lhs_row = r * rhs.cols;
                let rhs_row = k * rhs.cols;
                for c in 0..rhs.cols {
                    out.data[lhs_row + c] += a * rhs.data[rhs_row + c];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &CVec) -> Result<CVec> {
        if self.cols != v.len() {
            return Err(Error::DimMismatch {
                op: "mul_vec",
                left: (self.rows, self.cols),
                right: (v.len(), 1),
            });
        }
        CVec::from_fn(self.rows, |r| {
            let base = r * self.cols;
            let mut acc = Complex64::ZERO;
            for c in 0..self.cols {
                acc += self.data[base + c] * v[c];
            }
            acc
        })
    }

    /// Conjugate transpose `A*`.
    pub fn adjoint(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
            .expect("adjoint preserves nonzero dims")
    }

    pub fn transpose(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
            .expect("transpose preserves nonzero dims")
    }

    pub fn conj(&self) -> CMat {
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn add(&self, rhs: &CMat) -> Result<CMat> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimMismatch {
                op: "add",
                left: (self.rows, self.cols),
                right: (rhs.rows, rhs.cols),
            });
        }
        Ok(CMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, rhs: &CMat) -> Result<CMat> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimMismatch {
                op: "sub",
                left: (self.rows, self.cols),
                right: (rhs.rows, rhs.cols),
            });
        }
        Ok(CMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, c: Complex64) -> CMat {
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    pub fn scale_re(&self, c: f64) -> CMat {
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    /// Outer product `u v*`.
    pub fn outer(u: &CVec, v: &CVec) -> CMat {
        CMat::from_fn(u.len(), v.len(), |r, c| u[r] * v[c].conj())
            .expect("outer of nonzero-length vectors")
    }

    /// `self += c * u v*`, the rank-one accumulation used by the
    /// sequential estimators and Gram updates.
    pub fn add_scaled_outer(&mut self, u: &CVec, v: &CVec, c: Complex64) -> Result<()> {
        if self.rows != u.len() || self.cols != v.len() {
            return Err(Error::DimMismatch {
                op: "add_scaled_outer",
                left: (self.rows, self.cols),
                right: (u.len(), v.len()),
            });
        }
        for r in 0..self.rows {
            let ur = u[r] * c;
            let base = r * self.cols;
            for cidx in 0..self.cols {
                self.data[base + cidx] += ur * v[cidx].conj();
            }
        }
        Ok(())
    }

    /// Enforce Hermitian symmetry: `self = (self + self*)/2`.
    pub fn symmetrize(&mut self) {
        debug_assert_eq!(self.rows, self.cols);
        for r in 0..self.rows {
            for c in (r + 1)..self.cols {
                let avg = 0.5 * (self.get(r, c) + self.get(c, r).conj());
                self.set(r, c, avg);
                self.set(c, r, avg.conj());
            }
            let d = self.get(r, r);
            self.set(r, r, Complex64::new(d.re, 0.0));
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Maximum absolute column sum.
    pub fn one_norm(&self) -> f64 {
        let mut best: f64 = 0.0;
        for c in 0..self.cols {
            let mut acc = 0.0;
            for r in 0..self.rows {
                acc += self.get(r, c).norm();
            }
            best = best.max(acc);
        }
        best
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}
