//! Self-contained dense complex linear algebra.
//!
//! Everything operates on [`CVec`]/[`CMat`] with `f64` complex entries.
//! The least-squares solver selects a Gram-matrix branch (invert `A*A` for
//! tall systems, `A A*` for wide ones) with an explicit Cholesky inverse,
//! and the dominant singular pair comes from power iteration on the smaller
//! Gram matrix with a deterministic start vector, so results are
//! reproducible bit for bit under a fixed seed.

mod cmat;
mod cvec;
mod lstsq;
mod power;
mod rng;

pub use cmat::CMat;
pub use cvec::CVec;
pub use lstsq::{hermitian_psd_inverse, lstsq_min_norm, CONDITION_GUARD};
pub use power::{
    dominant_singular_pair, spectral_norm_sq, POWER_ITERATION_CAP, RAYLEIGH_TOL, RESIDUAL_TOL,
};
pub use rng::{cgauss_vec, unit_random, Rng};

pub use num_complex::Complex64;
