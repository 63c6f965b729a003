use super::{CVec, Complex64};
use crate::{Error, Result};
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

/// Deterministic 64-bit-seeded pseudo-random generator.
///
/// Wraps ChaCha12 keyed by the seed, with the 64-bit stream counter used to
/// derive independent sub-streams: the same `(seed, stream)` pair always
/// yields the same draw sequence, and distinct streams under one seed are
/// statistically independent. The harness keys noise streams by
/// `(run, iteration, slot)` so that reordering algorithm internals can
/// never change a noise realization.
#[derive(Debug, Clone)]
pub struct Rng {
    inner: ChaCha12Rng,
}

impl Rng {
    pub fn from_seed(seed: u64) -> Self {
        Self::from_seed_stream(seed, 0)
    }

    pub fn from_seed_stream(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha12Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        Rng { inner }
    }

    /// Standard normal draw, N(0, 1).
    pub fn standard_normal(&mut self) -> f64 {
        self.inner.sample(StandardNormal)
    }

    /// Circularly symmetric complex Gaussian draw, CN(0, 1): real and
    /// imaginary parts independent zero-mean Gaussians with variance 1/2.
    pub fn cgauss(&mut self) -> Complex64 {
        const HALF_SQRT: f64 = core::f64::consts::FRAC_1_SQRT_2;
        Complex64::new(
            self.standard_normal() * HALF_SQRT,
            self.standard_normal() * HALF_SQRT,
        )
    }

    /// Uniform draw in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.inner.random::<f64>()
    }
}

/// Length-`n` vector of i.i.d. CN(0, 1) entries.
pub fn cgauss_vec(n: usize, rng: &mut Rng) -> Result<CVec> {
    if n == 0 {
        return Err(Error::InvalidDimension {
            what: "cgauss_vec length",
            got: 0,
        });
    }
    CVec::from_fn(n, |_| rng.cgauss())
}

/// Complex random unit-norm vector: a normalized CN(0, I) draw, uniform on
/// the complex unit sphere. Redraws on an (probability-zero) all-zero draw.
pub fn unit_random(n: usize, rng: &mut Rng) -> Result<CVec> {
    loop {
        let v = cgauss_vec(n, rng)?;
        if v.norm() > 0.0 {
            return v.normalized();
        }
    }
}
