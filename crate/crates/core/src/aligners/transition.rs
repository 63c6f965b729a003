//! Eigendecomposition of the summed power method's state-transition
//! matrix for real diagonal channels. A validation helper for the test
//! surface; the aligners never call this at runtime.
//!
//! For `H = diag(h)` the combined-state recursion applies
//! `S = [[I, sqrt(rho)*beta*H], [sqrt(rho)*alpha*H, I]]`, whose
//! eigenvalues are `1 +- sqrt(rho*alpha*beta) * h_i` with a block
//! eigenbasis determined by the normalization pair `(alpha, beta)` alone.

use crate::numerics::{CMat, Complex64};
use crate::{Error, Result};
use alloc::format;
#[cfg_attr(test, allow(unused_imports))] // inherent f64 methods win when std is linked
use num_traits::Float;

fn validate(h: &[f64], alpha: f64, beta: f64, rho: f64) -> Result<()> {
    if h.is_empty() {
        return Err(Error::InvalidDimension {
            what: "diagonal gain count",
            got: 0,
        });
    }
    if h.iter().any(|g| !(g.is_finite() && *g > 0.0)) {
        return Err(Error::InvalidSpec {
            what: "diagonal gains must be positive".into(),
        });
    }
    if h.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InvalidSpec {
            what: "diagonal gains must be nonincreasing".into(),
        });
    }
    if h.len() >= 2 && h[0] <= h[1] {
        return Err(Error::InvalidSpec {
            what: "dominant mode must be strict (h1 > h2)".into(),
        });
    }
    for (name, v) in [("alpha", alpha), ("beta", beta), ("rho", rho)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::InvalidSpec {
                what: format!("{name} must be positive, got {v}"),
            });
        }
    }
    Ok(())
}

/// The `2M x 2M` state-transition matrix for one summed-power round.
pub fn state_transition_matrix(h: &[f64], alpha: f64, beta: f64, rho: f64) -> Result<CMat> {
    validate(h, alpha, beta, rho)?;
    let m = h.len();
    let sqrt_rho = rho.sqrt();
    CMat::from_fn(2 * m, 2 * m, |r, c| {
        if r == c {
            Complex64::ONE
        } else if r < m && c == r + m {
            Complex64::new(sqrt_rho * beta * h[r], 0.0)
        } else if r >= m && c == r - m {
            Complex64::new(sqrt_rho * alpha * h[r - m], 0.0)
        } else {
            Complex64::ZERO
        }
    })
}

/// Eigenvector matrix `U` and eigenvalue matrix `Lambda` diagonalizing the
/// state-transition matrix: `S = U Lambda U^{-1}`.
///
/// `U` has the block form `[[c1*I, c1*I], [c2*I, -c2*I]]` with
/// `c1 = sqrt(beta/(alpha+beta))`, `c2 = sqrt(alpha/(alpha+beta))`; the
/// eigenvalues are `1 + sqrt(rho*alpha*beta)*h_i` followed by
/// `1 - sqrt(rho*alpha*beta)*h_i`.
pub fn state_transition_eigendecomposition(
    h: &[f64],
    alpha: f64,
    beta: f64,
    rho: f64,
) -> Result<(CMat, CMat)> {
    validate(h, alpha, beta, rho)?;
    let m = h.len();
    let c1 = (beta / (alpha + beta)).sqrt();
    let c2 = (alpha / (alpha + beta)).sqrt();
    let u = CMat::from_fn(2 * m, 2 * m, |r, c| {
        let (block_r, block_c) = (r >= m, c >= m);
        let (i, j) = (r % m, c % m);
        if i != j {
            return Complex64::ZERO;
        }
        let v = match (block_r, block_c) {
            (false, _) => c1,
            (true, false) => c2,
            (true, true) => -c2,
        };
        Complex64::new(v, 0.0)
    })?;
    let root = (rho * alpha * beta).sqrt();
    let lambda = CMat::from_fn(2 * m, 2 * m, |r, c| {
        if r != c {
            return Complex64::ZERO;
        }
        let ev = if r < m {
            1.0 + root * h[r]
        } else {
            1.0 - root * h[r - m]
        };
        Complex64::new(ev, 0.0)
    })?;
    Ok((u, lambda))
}

/// Closed-form inverse of the eigenvector matrix `U`.
pub fn state_transition_basis_inverse(h_len: usize, alpha: f64, beta: f64) -> Result<CMat> {
    if h_len == 0 {
        return Err(Error::InvalidDimension {
            what: "diagonal gain count",
            got: 0,
        });
    }
    let m = h_len;
    let c1 = (beta / (alpha + beta)).sqrt();
    let c2 = (alpha / (alpha + beta)).sqrt();
    CMat::from_fn(2 * m, 2 * m, |r, c| {
        let (block_r, block_c) = (r >= m, c >= m);
        let (i, j) = (r % m, c % m);
        if i != j {
            return Complex64::ZERO;
        }
        let v = match (block_r, block_c) {
            (_, false) => 0.5 / c1,
            (false, true) => 0.5 / c2,
            (true, true) => -0.5 / c2,
        };
        Complex64::new(v, 0.0)
    })
}
