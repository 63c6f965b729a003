//! Channel models and the reference optimal beamformer pair.
//!
//! Three models: i.i.d. Rayleigh entries, a sparse clustered mmWave model
//! over half-wavelength ULAs, and real nonincreasing diagonal matrices
//! (the setting in which the summed power method's convergence is
//! established). Every sampled instance carries its dominant singular
//! triple so the simulator can normalize gains per realization.

use crate::numerics::{dominant_singular_pair, CMat, CVec, Complex64, Rng};
use crate::{Error, Result};
use alloc::format;
use alloc::vec::Vec;
#[cfg_attr(test, allow(unused_imports))] // inherent f64 methods win when std is linked
use num_traits::Float;

/// Channel matrix distribution.
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelModel {
    /// Entries i.i.d. CN(0, 1).
    Iid,
    /// Sum of `clusters * paths_per_cluster` rank-one ULA path components
    /// with CN(0,1) path gains and angles uniform over the angular spread
    /// centered at broadside, normalized so `E‖H‖_F² = m_r · m_t`.
    SparseMmWave {
        clusters: usize,
        angular_spread_deg: f64,
        paths_per_cluster: usize,
    },
    /// `H = diag(h)` with `h` real, positive, nonincreasing, `h1 > h2`.
    DiagonalReal { gains: Vec<f64> },
}

/// Antenna counts plus the channel model.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSpec {
    pub m_r: usize,
    pub m_t: usize,
    pub model: ChannelModel,
}

impl ChannelSpec {
    pub fn iid(m_r: usize, m_t: usize) -> Self {
        ChannelSpec {
            m_r,
            m_t,
            model: ChannelModel::Iid,
        }
    }

    /// Sparse clustered model with one path per cluster and a 120 degree
    /// azimuth spread.
    pub fn sparse(m_r: usize, m_t: usize, clusters: usize) -> Self {
        ChannelSpec {
            m_r,
            m_t,
            model: ChannelModel::SparseMmWave {
                clusters,
                angular_spread_deg: 120.0,
                paths_per_cluster: 1,
            },
        }
    }

    pub fn diagonal(gains: Vec<f64>) -> Self {
        let n = gains.len();
        ChannelSpec {
            m_r: n,
            m_t: n,
            model: ChannelModel::DiagonalReal { gains },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m_r == 0 {
            return Err(Error::InvalidDimension {
                what: "receive antennas",
                got: 0,
            });
        }
        if self.m_t == 0 {
            return Err(Error::InvalidDimension {
                what: "transmit antennas",
                got: 0,
            });
        }
        match &self.model {
            ChannelModel::Iid => Ok(()),
            ChannelModel::SparseMmWave {
                clusters,
                angular_spread_deg,
                paths_per_cluster,
            } => {
                if *clusters == 0 || *paths_per_cluster == 0 {
                    return Err(Error::InvalidSpec {
                        what: format!(
                            "sparse model needs clusters >= 1 and paths_per_cluster >= 1, \
                             got {clusters} and {paths_per_cluster}"
                        ),
                    });
                }
                if !(angular_spread_deg.is_finite() && *angular_spread_deg > 0.0) {
                    return Err(Error::InvalidSpec {
                        what: format!("angular spread must be positive, got {angular_spread_deg}"),
                    });
                }
                Ok(())
            }
            ChannelModel::DiagonalReal { gains } => {
                if gains.len() != self.m_r || gains.len() != self.m_t {
                    return Err(Error::InvalidSpec {
                        what: format!(
                            "diagonal model needs m_r = m_t = len(gains), got {}x{} with {} gains",
                            self.m_r,
                            self.m_t,
                            gains.len()
                        ),
                    });
                }
                if gains.iter().any(|g| !(g.is_finite() && *g > 0.0)) {
                    return Err(Error::InvalidSpec {
                        what: "diagonal gains must be positive and finite".into(),
                    });
                }
                if gains.windows(2).any(|w| w[0] < w[1]) {
                    return Err(Error::InvalidSpec {
                        what: "diagonal gains must be nonincreasing".into(),
                    });
                }
                if gains.len() >= 2 && gains[0] <= gains[1] {
                    return Err(Error::InvalidSpec {
                        what: "diagonal model needs a strictly dominant mode (h1 > h2)".into(),
                    });
                }
                Ok(())
            }
        }
    }
}

/// A sampled channel with its reference dominant singular triple.
#[derive(Debug, Clone)]
pub struct ChannelInstance {
    pub h: CMat,
    pub sigma1: f64,
    pub f_opt: CVec,
    pub z_opt: CVec,
    /// Maximum effective channel gain, `sigma1^2`.
    pub gain_max: f64,
}

/// Half-wavelength ULA steering vector: entry `i` is
/// `exp(j*pi*i*sin(angle)) / sqrt(m)`.
pub fn steering_vector(m: usize, angle_rad: f64) -> Result<CVec> {
    if m == 0 {
        return Err(Error::InvalidDimension {
            what: "array size",
            got: 0,
        });
    }
    let scale = 1.0 / (m as f64).sqrt();
    let phase_step = core::f64::consts::PI * angle_rad.sin();
    CVec::from_fn(m, |i| {
        Complex64::from_polar(scale, phase_step * i as f64)
    })
}

/// Dominant singular triple of `H` as `(f_opt, z_opt, gain_max)`.
pub fn optimal_pair(h: &CMat) -> Result<(CVec, CVec, f64)> {
    let (sigma, u, v) = dominant_singular_pair(h)?;
    Ok((v, u, sigma * sigma))
}

/// Draw one channel realization and attach its optimal pair.
pub fn sample_channel(spec: &ChannelSpec, rng: &mut Rng) -> Result<ChannelInstance> {
    spec.validate()?;
    let h = match &spec.model {
        ChannelModel::Iid => CMat::from_fn(spec.m_r, spec.m_t, |_, _| rng.cgauss())?,
        ChannelModel::SparseMmWave {
            clusters,
            angular_spread_deg,
            paths_per_cluster,
        } => {
            let total_paths = clusters * paths_per_cluster;
            let half_spread = angular_spread_deg.to_radians() / 2.0;
            let scale = ((spec.m_r * spec.m_t) as f64 / total_paths as f64).sqrt();
            let mut h = CMat::zeros(spec.m_r, spec.m_t)?;
            for _ in 0..total_paths {
                let gain = rng.cgauss();
                let theta = rng.uniform(-half_spread, half_spread);
                let phi = rng.uniform(-half_spread, half_spread);
                let a_r = steering_vector(spec.m_r, theta)?;
                let a_t = steering_vector(spec.m_t, phi)?;
                h.add_scaled_outer(&a_r, &a_t, gain * scale)?;
            }
            h
        }
        ChannelModel::DiagonalReal { gains } => CMat::diag_re(gains)?,
    };
    let (f_opt, z_opt, gain_max) = optimal_pair(&h)?;
    Ok(ChannelInstance {
        sigma1: gain_max.sqrt(),
        h,
        f_opt,
        z_opt,
        gain_max,
    })
}
