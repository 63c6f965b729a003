//! Pilot-based MMSE channel estimation benchmark.
//!
//! Both nodes sound the channel once with scaled unitary DFT training
//! matrices under a total-energy constraint over `k_max` slots, form MMSE
//! channel estimates, and read their beams off the dominant singular pair
//! of the estimate. This is the traditional batch alternative the
//! iterative schemes are compared against.

use crate::numerics::{dominant_singular_pair, CMat, CVec, Complex64, Rng};
use crate::pingpong::LinkParams;
use crate::{Error, Result};
use alloc::format;
#[cfg_attr(test, allow(unused_imports))] // inherent f64 methods win when std is linked
use num_traits::Float;

/// Unitary DFT matrix: entry `(j, k) = exp(-2*pi*i*j*k/n) / sqrt(n)`.
pub fn dft_matrix(n: usize) -> Result<CMat> {
    if n == 0 {
        return Err(Error::InvalidDimension {
            what: "DFT size",
            got: 0,
        });
    }
    let scale = 1.0 / (n as f64).sqrt();
    let step = -2.0 * core::f64::consts::PI / n as f64;
    CMat::from_fn(n, n, |j, k| {
        Complex64::from_polar(scale, step * (j * k) as f64)
    })
}

/// Beamformer estimates from the pilot scheme. A side is `None` when its
/// channel estimate degenerated to zero (the zero-SNR limit), in which
/// case the caller keeps its prior beam.
#[derive(Debug, Clone)]
pub struct PilotBeams {
    pub f_hat: Option<CVec>,
    pub z_hat: Option<CVec>,
}

/// Run the pilot-based MMSE scheme over a `k_max`-slot training budget.
///
/// Downlink: `Y_o = sqrt(rho_o*k_max/M_t) H P_o + N_o` with `P_o` the
/// `M_t x M_t` unitary DFT, and `H_o = sqrt(a)/(1+a) * Y_o P_o*` with
/// `a = rho_o*k_max/M_t`. The uplink mirrors with `H^T` and `M_r`.
pub fn pilot_mmse_run(
    h: &CMat,
    link: &LinkParams,
    k_max: usize,
    rng_down: &mut Rng,
    rng_up: &mut Rng,
) -> Result<PilotBeams> {
    let (m_r, m_t) = (h.rows(), h.cols());
    if k_max < m_r.max(m_t) {
        return Err(Error::InvalidSpec {
            what: format!(
                "pilot training needs k_max >= max(M_r, M_t) = {}, got {k_max}",
                m_r.max(m_t)
            ),
        });
    }

    // Downlink estimate at node 2.
    let a_o = link.rho_o * k_max as f64 / m_t as f64;
    let p_o = dft_matrix(m_t)?;
    let mut y_o = h.matmul(&p_o)?.scale_re(a_o.sqrt());
    if !link.noiseless {
        let noise = CMat::from_fn(m_r, m_t, |_, _| rng_down.cgauss())?;
        y_o = y_o.add(&noise)?;
    }
    let h_o = y_o.matmul(&p_o.adjoint())?.scale_re(a_o.sqrt() / (1.0 + a_o));

    // Uplink estimate at node 1 (channel H^T, training P_e of size M_r).
    let a_e = link.rho_e * k_max as f64 / m_r as f64;
    let p_e = dft_matrix(m_r)?;
    let ht = h.transpose();
    let mut y_e = ht.matmul(&p_e)?.scale_re(a_e.sqrt());
    if !link.noiseless {
        let noise = CMat::from_fn(m_t, m_r, |_, _| rng_up.cgauss())?;
        y_e = y_e.add(&noise)?;
    }
    let h_e = y_e.matmul(&p_e.adjoint())?.scale_re(a_e.sqrt() / (1.0 + a_e));

    // Beams from the dominant singular pair of each node's estimate. The
    // estimate of H^T has left singular vectors conjugate to the right
    // singular vectors of H, hence the conjugation for f.
    let z_hat = if h_o.frobenius_norm() > 0.0 {
        let (_, u, _) = dominant_singular_pair(&h_o)?;
        Some(u)
    } else {
        None
    };
    let f_hat = if h_e.frobenius_norm() > 0.0 {
        let (_, u, _) = dominant_singular_pair(&h_e)?;
        Some(u.conj())
    } else {
        None
    };
    Ok(PilotBeams { f_hat, z_hat })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::optimal_pair;
    use crate::metrics::beam_angle;

    #[test]
    fn dft_is_unitary() {
        for n in [1usize, 4, 32] {
            let p = dft_matrix(n).unwrap();
            let prod = p.matmul(&p.adjoint()).unwrap();
            let err = prod
                .sub(&CMat::identity(n).unwrap())
                .unwrap()
                .frobenius_norm();
            assert!(err < 1e-12, "DFT({n}) not unitary: {err:e}");
        }
    }

    #[test]
    fn noiseless_estimate_recovers_true_pair() {
        let mut rng = Rng::from_seed(4);
        let h = CMat::from_fn(4, 8, |_, _| rng.cgauss()).unwrap();
        let link = LinkParams {
            rho_o: 2.0,
            rho_e: 2.0,
            noiseless: true,
        };
        let beams = pilot_mmse_run(&h, &link, 16, &mut rng.clone(), &mut rng).unwrap();
        let (f_opt, z_opt, _) = optimal_pair(&h).unwrap();
        let f_hat = beams.f_hat.unwrap();
        let z_hat = beams.z_hat.unwrap();
        assert!(beam_angle(&f_opt, &f_hat).unwrap() <= 1e-8);
        assert!(beam_angle(&z_opt, &z_hat).unwrap() <= 1e-8);
    }

    #[test]
    fn zero_snr_estimate_degenerates_to_none() {
        let mut rng = Rng::from_seed(5);
        let h = CMat::from_fn(3, 4, |_, _| rng.cgauss()).unwrap();
        let link = LinkParams {
            rho_o: 0.0,
            rho_e: 0.0,
            noiseless: true,
        };
        let beams = pilot_mmse_run(&h, &link, 8, &mut rng.clone(), &mut rng).unwrap();
        assert!(beams.f_hat.is_none() && beams.z_hat.is_none());
    }

    #[test]
    fn mmse_shrinkage_scales_toward_zero() {
        // As a -> 0 the estimate's power collapses toward the prior mean.
        let mut rng = Rng::from_seed(6);
        let h = CMat::from_fn(3, 3, |_, _| rng.cgauss()).unwrap();
        let mut norms = alloc::vec::Vec::new();
        for rho_db in [0.0, -20.0, -40.0] {
            let link = LinkParams::from_db(rho_db, rho_db, true);
            let a = link.rho_o * 8.0 / 3.0;
            let p = dft_matrix(3).unwrap();
            let y = h.matmul(&p).unwrap().scale_re(a.sqrt());
            let est = y
                .matmul(&p.adjoint())
                .unwrap()
                .scale_re(a.sqrt() / (1.0 + a));
            norms.push(est.frobenius_norm());
        }
        assert!(norms[0] > norms[1] && norms[1] > norms[2]);
    }

    #[test]
    fn short_training_budget_is_rejected() {
        let mut rng = Rng::from_seed(7);
        let h = CMat::from_fn(4, 8, |_, _| rng.cgauss()).unwrap();
        let link = LinkParams {
            rho_o: 1.0,
            rho_e: 1.0,
            noiseless: false,
        };
        assert!(matches!(
            pilot_mmse_run(&h, &link, 7, &mut rng.clone(), &mut rng),
            Err(Error::InvalidSpec { .. })
        ));
    }
}
