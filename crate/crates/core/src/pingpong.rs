//! The two-slot observation model and the ideal feedback conduit.
//!
//! Aligners never touch the channel matrix directly: slot 1 (ping) yields
//! `y_o = sqrt(rho_o) H f + n_o` at node 2 and slot 2 (pong) yields
//! `y_e = sqrt(rho_e) H^T conj(z) + n_e` at node 1. This module is the
//! enforced boundary that keeps every aligner blind.

use crate::numerics::{CMat, CVec, Rng};
use crate::{Error, Result};
#[cfg_attr(test, allow(unused_imports))] // inherent f64 methods win when std is linked
use num_traits::Float;

const UNIT_NORM_TOL: f64 = 1e-9;

/// Link SNRs in linear scale plus the diagnostic noiseless switch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkParams {
    /// Downlink SNR (linear).
    pub rho_o: f64,
    /// Uplink SNR (linear).
    pub rho_e: f64,
    /// When set, both noise vectors are forced to zero.
    pub noiseless: bool,
}

impl LinkParams {
    /// dB-to-linear conversion happens here, exactly once.
    pub fn from_db(snr_db_o: f64, snr_db_e: f64, noiseless: bool) -> Self {
        LinkParams {
            rho_o: 10f64.powf(snr_db_o / 10.0),
            rho_e: 10f64.powf(snr_db_e / 10.0),
            noiseless,
        }
    }

    pub fn validate(&self) -> Result<()> {
        // -inf dB maps to rho = 0, which is a valid zero-information link.
        if self.rho_o.is_nan() || self.rho_o < 0.0 || self.rho_o == f64::INFINITY {
            return Err(Error::ContractViolation {
                what: "downlink SNR must be finite and nonnegative",
                value: self.rho_o,
            });
        }
        if self.rho_e.is_nan() || self.rho_e < 0.0 || self.rho_e == f64::INFINITY {
            return Err(Error::ContractViolation {
                what: "uplink SNR must be finite and nonnegative",
                value: self.rho_e,
            });
        }
        Ok(())
    }
}

fn check_unit(beam: &CVec, what: &'static str) -> Result<()> {
    let norm = beam.norm();
    if (norm - 1.0).abs() > UNIT_NORM_TOL {
        return Err(Error::ContractViolation { what, value: norm });
    }
    Ok(())
}

/// Slot-1 observation at node 2: `y_o = sqrt(rho_o) H f + n_o`.
pub fn ping(h: &CMat, f: &CVec, link: &LinkParams, rng: &mut Rng) -> Result<CVec> {
    if h.cols() != f.len() {
        return Err(Error::DimMismatch {
            op: "ping",
            left: (h.rows(), h.cols()),
            right: (f.len(), 1),
        });
    }
    check_unit(f, "ping beamformer must be unit norm")?;
    let mut y = h.mul_vec(f)?.scale_re(link.rho_o.sqrt());
    if !link.noiseless {
        let noise = CVec::from_fn(h.rows(), |_| rng.cgauss())?;
        y.add_assign(&noise)?;
    }
    Ok(y)
}

/// Slot-2 observation at node 1: `y_e = sqrt(rho_e) H^T conj(z) + n_e`.
pub fn pong(h: &CMat, z: &CVec, link: &LinkParams, rng: &mut Rng) -> Result<CVec> {
    if h.rows() != z.len() {
        return Err(Error::DimMismatch {
            op: "pong",
            left: (h.rows(), h.cols()),
            right: (z.len(), 1),
        });
    }
    check_unit(z, "pong combiner must be unit norm")?;
    // H^T conj(z) = conj(H* z), computed without materializing H^T.
    let mut y = h.adjoint().mul_vec(z)?.conj().scale_re(link.rho_e.sqrt());
    if !link.noiseless {
        let noise = CVec::from_fn(h.cols(), |_| rng.cgauss())?;
        y.add_assign(&noise)?;
    }
    Ok(y)
}

/// Ideal feedback conduit: error-free, zero-delay vector transfer with bit
/// accounting at `bits_per_element` bits per complex-valued element.
#[derive(Debug, Clone, PartialEq)]
pub struct FeedbackLog {
    pub bits_per_element: u32,
    pub bits: u64,
}

impl FeedbackLog {
    pub fn new(bits_per_element: u32) -> Self {
        FeedbackLog {
            bits_per_element,
            bits: 0,
        }
    }

    /// Deliver an identical copy to the other node and log its cost.
    pub fn transfer(&mut self, v: &CVec) -> CVec {
        self.bits += v.len() as u64 * self.bits_per_element as u64;
        v.clone()
    }
}

/// One ping-pong round as seen on the air: the beam pair in effect during
/// channel use `k` and the two observations it produced.
#[derive(Debug, Clone)]
pub struct PingPongTrace {
    pub k: usize,
    pub f_used: CVec,
    pub z_used: CVec,
    pub y_o: CVec,
    pub y_e: Option<CVec>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{unit_random, Complex64};

    fn diag21() -> CMat {
        CMat::diag_re(&[2.0, 1.0]).unwrap()
    }

    #[test]
    fn noiseless_ping_is_scaled_product() {
        let link = LinkParams {
            rho_o: 4.0,
            rho_e: 1.0,
            noiseless: true,
        };
        let mut rng = Rng::from_seed(1);
        let f = CVec::basis(2, 0).unwrap();
        let y = ping(&diag21(), &f, &link, &mut rng).unwrap();
        assert!((y[0] - Complex64::new(4.0, 0.0)).norm() < 1e-14);
        assert!(y[1].norm() < 1e-14);
    }

    #[test]
    fn noiseless_pong_uses_transpose() {
        let link = LinkParams {
            rho_o: 1.0,
            rho_e: 9.0,
            noiseless: true,
        };
        let mut rng = Rng::from_seed(1);
        let z = CVec::basis(2, 0).unwrap();
        let y = pong(&diag21(), &z, &link, &mut rng).unwrap();
        assert!((y[0] - Complex64::new(6.0, 0.0)).norm() < 1e-14);
        assert!(y[1].norm() < 1e-14);
    }

    #[test]
    fn zero_snr_ping_is_pure_noise() {
        let link = LinkParams {
            rho_o: 0.0,
            rho_e: 0.0,
            noiseless: false,
        };
        let mut rng = Rng::from_seed(2);
        let f = unit_random(3, &mut rng).unwrap();
        let h = CMat::from_fn(4, 3, |_, _| rng.cgauss()).unwrap();
        let trials = 20_000;
        let mut acc = 0.0;
        for _ in 0..trials {
            acc += ping(&h, &f, &link, &mut rng).unwrap().norm_sq();
        }
        let mean = acc / (trials * 4) as f64;
        assert!((mean - 1.0).abs() < 0.03, "noise power {mean}");
    }

    #[test]
    fn noise_power_matches_dimension() {
        let link = LinkParams {
            rho_o: 1.0,
            rho_e: 1.0,
            noiseless: false,
        };
        let mut rng = Rng::from_seed(3);
        let h = CMat::from_fn(3, 5, |_, _| rng.cgauss()).unwrap();
        let f = unit_random(5, &mut rng).unwrap();
        let z = unit_random(3, &mut rng).unwrap();
        let hf = h.mul_vec(&f).unwrap();
        let htz = h.adjoint().mul_vec(&z).unwrap().conj();

        let trials = 100_000;
        let (mut acc_o, mut acc_e) = (0.0, 0.0);
        for _ in 0..trials {
            let yo = ping(&h, &f, &link, &mut rng).unwrap();
            acc_o += yo.sub(&hf).unwrap().norm_sq();
            let ye = pong(&h, &z, &link, &mut rng).unwrap();
            acc_e += ye.sub(&htz).unwrap().norm_sq();
        }
        let mean_o = acc_o / (trials * 3) as f64;
        let mean_e = acc_e / (trials * 5) as f64;
        assert!((mean_o - 1.0).abs() < 0.02, "slot-1 noise power {mean_o}");
        assert!((mean_e - 1.0).abs() < 0.02, "slot-2 noise power {mean_e}");
    }

    #[test]
    fn reciprocity_gain_identity() {
        let link = LinkParams {
            rho_o: 1.0,
            rho_e: 1.0,
            noiseless: true,
        };
        let mut rng = Rng::from_seed(4);
        let h = CMat::from_fn(4, 6, |_, _| rng.cgauss()).unwrap();
        let f = unit_random(6, &mut rng).unwrap();
        let z = unit_random(4, &mut rng).unwrap();
        let forward = z.dot(&ping(&h, &f, &link, &mut rng).unwrap()).unwrap().norm();
        let backward = f
            .conj()
            .dot(&pong(&h, &z, &link, &mut rng).unwrap())
            .unwrap()
            .norm();
        assert!((forward - backward).abs() < 1e-12);
    }

    #[test]
    fn noiseless_ping_is_linear() {
        let link = LinkParams {
            rho_o: 2.5,
            rho_e: 1.0,
            noiseless: true,
        };
        let mut rng = Rng::from_seed(5);
        let h = CMat::from_fn(3, 4, |_, _| rng.cgauss()).unwrap();
        let f1 = unit_random(4, &mut rng).unwrap();
        let f2 = unit_random(4, &mut rng).unwrap();
        let (a, b) = (Complex64::new(0.3, -0.4), Complex64::new(0.8, 0.1));
        let combined = f1.scale(a).add(&f2.scale(b)).unwrap();
        let combined_unit = combined.normalized().unwrap();
        let y_combined = ping(&h, &combined_unit, &link, &mut rng).unwrap();
        let y1 = ping(&h, &f1, &link, &mut rng).unwrap();
        let y2 = ping(&h, &f2, &link, &mut rng).unwrap();
        let scale = 1.0 / combined.norm();
        let expect = y1.scale(a * scale).add(&y2.scale(b * scale)).unwrap();
        assert!(y_combined.sub(&expect).unwrap().norm() < 1e-12);
    }

    #[test]
    fn non_unit_beam_is_rejected() {
        let link = LinkParams {
            rho_o: 1.0,
            rho_e: 1.0,
            noiseless: true,
        };
        let mut rng = Rng::from_seed(6);
        let f = CVec::basis(2, 0).unwrap().scale_re(1.1);
        assert!(matches!(
            ping(&diag21(), &f, &link, &mut rng),
            Err(Error::ContractViolation { .. })
        ));
        let z = CVec::basis(3, 0).unwrap();
        assert!(matches!(
            pong(&diag21(), &z, &link, &mut rng),
            Err(Error::DimMismatch { .. })
        ));
    }

    #[test]
    fn feedback_is_identity_with_bit_accounting() {
        let mut log = FeedbackLog::new(16);
        let mut rng = Rng::from_seed(7);
        let v = unit_random(32, &mut rng).unwrap();
        let delivered = log.transfer(&v);
        assert_eq!(delivered, v);
        assert_eq!(log.bits, 32 * 16);
        let w = unit_random(4, &mut rng).unwrap();
        log.transfer(&w);
        assert_eq!(log.bits, 16 * 36);
    }

    #[test]
    fn slot_streams_are_independent() {
        // Same (seed, k) but different slot sub-streams: empirical
        // cross-correlation of the first noise entries stays near zero.
        let draws = 100_000;
        let mut acc = Complex64::ZERO;
        for k in 0..draws {
            let mut slot1 = Rng::from_seed_stream(99, 16 + 4 * k + 1);
            let mut slot2 = Rng::from_seed_stream(99, 16 + 4 * k + 2);
            let n1 = slot1.cgauss();
            let n2 = slot2.cgauss();
            acc += n1.conj() * n2;
        }
        let corr = (acc / draws as f64).norm();
        assert!(corr < 0.02, "cross-slot correlation {corr}");
    }
}
