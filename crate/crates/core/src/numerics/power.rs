use super::{CMat, CVec, Complex64};
use crate::{Error, Result};

/// Relative tolerance on the Rayleigh-quotient change between iterations.
pub const RAYLEIGH_TOL: f64 = 1e-14;
/// Iteration cap for the power method.
pub const POWER_ITERATION_CAP: usize = 100_000;
/// Acceptance bound on the singular-pair residuals, relative to sigma1.
pub const RESIDUAL_TOL: f64 = 1e-10;

/// Dominant singular triple `(sigma1, u, v)` with `A v = sigma1 u` and
/// `A* u = sigma1 v`.
///
/// Runs power iteration on the smaller Gram matrix (`A*A` or `A A*`) from a
/// deterministic normalized all-ones start, so the returned pair is
/// reproducible. Vectors are phase-canonicalized: the first non-negligible
/// entry of `v` is rotated onto the nonnegative real axis with `u`
/// co-rotated. Fails with a non-convergence error carrying the final
/// residual when the pair does not meet [`RESIDUAL_TOL`] (nearly degenerate
/// leading singular values).
pub fn dominant_singular_pair(a: &CMat) -> Result<(f64, CVec, CVec)> {
    if a.frobenius_norm() == 0.0 {
        return Err(Error::Degenerate {
            what: "zero matrix in dominant_singular_pair",
        });
    }
    let iterate_right = a.cols() <= a.rows();
    let gram = if iterate_right {
        a.adjoint().matmul(a)?
    } else {
        a.matmul(&a.adjoint())?
    };

    let (x, used) = power_iterate(&gram)?;

    // Recover the pair from the iterated side.
    let (sigma, u, v) = if iterate_right {
        let v = x;
        let av = a.mul_vec(&v)?;
        let sigma = av.norm();
        if sigma == 0.0 {
            return Err(Error::NonConvergence {
                iterations: used,
                residual: a.frobenius_norm(),
            });
        }
        (sigma, av.scale_re(1.0 / sigma), v)
    } else {
        let u = x;
        let ahu = a.adjoint().mul_vec(&u)?;
        let sigma = ahu.norm();
        if sigma == 0.0 {
            return Err(Error::NonConvergence {
                iterations: used,
                residual: a.frobenius_norm(),
            });
        }
        let v = ahu.scale_re(1.0 / sigma);
        (sigma, u, v)
    };

    // Both defining relations must hold to RESIDUAL_TOL * sigma.
    let r1 = a.mul_vec(&v)?.sub(&u.scale_re(sigma))?.norm();
    let r2 = a.adjoint().mul_vec(&u)?.sub(&v.scale_re(sigma))?.norm();
    let residual = r1.max(r2);
    if residual > RESIDUAL_TOL * sigma {
        return Err(Error::NonConvergence {
            iterations: used,
            residual,
        });
    }

    let (u, v) = canonicalize_phase(u, v);
    Ok((sigma, u, v))
}

/// Squared spectral norm `sigma1^2 = lambda_max(A*A)`.
pub fn spectral_norm_sq(a: &CMat) -> Result<f64> {
    dominant_singular_pair(a).map(|(s, _, _)| s * s)
}

fn power_iterate(gram: &CMat) -> Result<(CVec, usize)> {
    let n = gram.rows();
    let mut x = CVec::from_fn(n, |_| Complex64::ONE)?.normalized()?;

    // The all-ones start can sit in the null space of a structured Gram;
    // fall back to basis vectors until the image is nonzero.
    if gram.mul_vec(&x)?.norm() == 0.0 {
        let mut found = false;
        for j in 0..n {
            let e = CVec::basis(n, j)?;
            if gram.mul_vec(&e)?.norm() > 0.0 {
                x = e;
                found = true;
                break;
            }
        }
        if !found {
            return Err(Error::Degenerate {
                what: "zero Gram matrix in power iteration",
            });
        }
    }

    let mut lambda_prev = f64::NAN;
    for it in 0..POWER_ITERATION_CAP {
        let y = gram.mul_vec(&x)?;
        let lambda = x.dot(&y)?.re;
        let ynorm = y.norm();
        if ynorm == 0.0 {
            return Ok((x, it));
        }
        // The Gram residual ‖Gx − λx‖ ≤ RESIDUAL_TOL·λ is equivalent to the
        // singular-pair residual bound, and it lags the Rayleigh criterion
        // (the quotient converges at twice the vector's exponent), so both
        // must hold before stopping.
        let rayleigh_settled = lambda_prev.is_finite()
            && (lambda - lambda_prev).abs() <= RAYLEIGH_TOL * lambda.abs();
        if rayleigh_settled {
            let gram_residual = y.sub(&x.scale_re(lambda))?.norm();
            if gram_residual <= RESIDUAL_TOL * lambda.abs() {
                x = y.scale_re(1.0 / ynorm);
                return Ok((x, it + 1));
            }
        }
        x = y.scale_re(1.0 / ynorm);
        lambda_prev = lambda;
    }
    Ok((x, POWER_ITERATION_CAP))
}

fn canonicalize_phase(u: CVec, v: CVec) -> (CVec, CVec) {
    let anchor = v.iter().find(|z| z.norm() > 1e-12).copied();
    match anchor {
        Some(z) if z.norm() > 0.0 => {
            let rot = z.conj() / z.norm();
            (u.scale(rot), v.scale(rot))
        }
        _ => (u, v),
    }
}
