use super::{CMat, Complex64};
use crate::{Error, Result};
#[cfg_attr(test, allow(unused_imports))] // inherent f64 methods win when std is linked
use num_traits::Float;

/// Condition-estimate guard for Gram-matrix inversion, chosen near the
/// double-precision safety margin.
pub const CONDITION_GUARD: f64 = 1e12;

/// Explicit inverse of a Hermitian positive-definite matrix via Cholesky.
///
/// Fails with a rank-deficiency error when a pivot collapses or the 1-norm
/// condition estimate `‖G‖₁ ‖G⁻¹‖₁` exceeds [`CONDITION_GUARD`].
pub fn hermitian_psd_inverse(g: &CMat) -> Result<CMat> {
    if g.rows() != g.cols() {
        return Err(Error::DimMismatch {
            op: "hermitian_psd_inverse",
            left: (g.rows(), g.cols()),
            right: (g.cols(), g.rows()),
        });
    }
    let n = g.rows();
    let mut work = g.clone();
    work.symmetrize();

    let scale = (0..n)
        .map(|i| work.get(i, i).re.abs())
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let pivot_floor = scale * f64::EPSILON * n as f64;

    // In-place lower Cholesky factor L with G = L L*.
    let mut l = CMat::zeros(n, n)?;
    for j in 0..n {
        let mut d = work.get(j, j).re;
        for k in 0..j {
            d -= l.get(j, k).norm_sqr();
        }
        if !(d.is_finite() && d > pivot_floor) {
            return Err(Error::RankDeficient {
                dim: n,
                cond: f64::INFINITY,
            });
        }
        let djj = d.sqrt();
        l.set(j, j, Complex64::new(djj, 0.0));
        for i in (j + 1)..n {
            let mut acc = work.get(i, j);
            for k in 0..j {
                acc -= l.get(i, k) * l.get(j, k).conj();
            }
            l.set(i, j, acc / djj);
        }
    }

    // Invert L in place (forward substitution on the identity), then
    // G^{-1} = L^{-*} L^{-1}.
    let mut linv = CMat::zeros(n, n)?;
    for col in 0..n {
        for i in col..n {
            let mut rhs = if i == col {
                Complex64::ONE
            } else {
                Complex64::ZERO
            };
            for k in col..i {
                rhs -= l.get(i, k) * linv.get(k, col);
            }
            linv.set(i, col, rhs / l.get(i, i));
        }
    }
    let mut inv = linv.adjoint().matmul(&linv)?;
    inv.symmetrize();

    let cond = g.one_norm() * inv.one_norm();
    if !cond.is_finite() || cond > CONDITION_GUARD {
        return Err(Error::RankDeficient { dim: n, cond });
    }
    Ok(inv)
}

/// Minimum-norm least-squares solve `X = A† B`.
///
/// Branches on the shape of `A`: for tall systems the normal equations
/// invert `A*A`; for wide systems `A A*`, yielding the minimum-Frobenius
/// solution among the minimizers of `‖AX − B‖_F`.
pub fn lstsq_min_norm(a: &CMat, b: &CMat) -> Result<CMat> {
    if a.rows() != b.rows() {
        return Err(Error::DimMismatch {
            op: "lstsq_min_norm",
            left: (a.rows(), a.cols()),
            right: (b.rows(), b.cols()),
        });
    }
    if a.frobenius_norm() == 0.0 {
        return Err(Error::Degenerate {
            what: "zero coefficient matrix in lstsq_min_norm",
        });
    }
    let ah = a.adjoint();
    if a.rows() >= a.cols() {
        let gram = ah.matmul(a)?;
        let inv = hermitian_psd_inverse(&gram)?;
        inv.matmul(&ah.matmul(b)?)
    } else {
        let gram = a.matmul(&ah)?;
        let inv = hermitian_psd_inverse(&gram)?;
        ah.matmul(&inv.matmul(b)?)
    }
}
