//! Simple power method baseline (BIMA): each node conjugates, normalizes,
//! and retransmits its most recent received vector. Memoryless, no
//! feedback; the noiseless loop is an implicit power iteration on the
//! channel Gram matrix.

use crate::numerics::CVec;
use crate::pingpong::FeedbackLog;
use crate::Result;

use super::PingPongAligner;

pub struct SimplePowerAligner {
    f_cur: CVec,
    z_cur: CVec,
}

impl SimplePowerAligner {
    pub fn new(_m_r: usize, _m_t: usize, f0: CVec, z0: CVec) -> Result<Self> {
        Ok(SimplePowerAligner { f_cur: f0, z_cur: z0 })
    }
}

impl PingPongAligner for SimplePowerAligner {
    fn ping_beam(&self) -> &CVec {
        &self.f_cur
    }

    fn observe_ping(&mut self, _k: usize, y_o: &CVec, _fb: &mut FeedbackLog) -> Result<()> {
        self.z_cur = y_o.normalized()?;
        Ok(())
    }

    fn pong_beam(&self) -> &CVec {
        &self.z_cur
    }

    fn observe_pong(&mut self, _k: usize, y_e: &CVec, _fb: &mut FeedbackLog) -> Result<()> {
        self.f_cur = y_e.conj().normalized()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{CMat, Complex64, Rng};
    use crate::pingpong::{ping, pong, LinkParams};

    fn round_trip(a: &mut SimplePowerAligner, h: &CMat, link: &LinkParams, seed: u64) {
        let mut fb = FeedbackLog::new(16);
        let mut rng1 = Rng::from_seed_stream(seed, 1);
        let y_o = ping(h, a.ping_beam(), link, &mut rng1).unwrap();
        a.observe_ping(0, &y_o, &mut fb).unwrap();
        let mut rng2 = Rng::from_seed_stream(seed, 2);
        let y_e = pong(h, a.pong_beam(), link, &mut rng2).unwrap();
        a.observe_pong(0, &y_e, &mut fb).unwrap();
        assert_eq!(fb.bits, 0);
    }

    #[test]
    fn one_round_trip_on_diag_2_1() {
        // f = (e1+e2)/sqrt(2) -> z prop (2,1) -> f prop (4,1)/sqrt(17).
        let h = CMat::diag_re(&[2.0, 1.0]).unwrap();
        let link = LinkParams {
            rho_o: 1.0,
            rho_e: 1.0,
            noiseless: true,
        };
        let f0 = CVec::new(alloc::vec![
            Complex64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0),
            Complex64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0),
        ])
        .unwrap();
        let z0 = CVec::basis(2, 0).unwrap();
        let mut a = SimplePowerAligner::new(2, 2, f0, z0).unwrap();
        round_trip(&mut a, &h, &link, 0);

        let s = 17f64.sqrt();
        let expect = CVec::new(alloc::vec![
            Complex64::new(4.0 / s, 0.0),
            Complex64::new(1.0 / s, 0.0),
        ])
        .unwrap();
        assert!(a.ping_beam().sub(&expect).unwrap().norm() < 1e-12);
    }

    #[test]
    fn tan_angle_contracts_by_gram_ratio() {
        // On diag(2,1) each round trip applies diag(4,1): tan(angle to e1)
        // shrinks by exactly 1/4.
        let h = CMat::diag_re(&[2.0, 1.0]).unwrap();
        let link = LinkParams {
            rho_o: 1.0,
            rho_e: 1.0,
            noiseless: true,
        };
        let mut rng = Rng::from_seed(5);
        let f0 = crate::numerics::unit_random(2, &mut rng).unwrap();
        let z0 = crate::numerics::unit_random(2, &mut rng).unwrap();
        let mut a = SimplePowerAligner::new(2, 2, f0, z0).unwrap();
        for k in 0..12 {
            let before = a.ping_beam()[1].norm() / a.ping_beam()[0].norm();
            round_trip(&mut a, &h, &link, k);
            let after = a.ping_beam()[1].norm() / a.ping_beam()[0].norm();
            if before < 1e-12 {
                break;
            }
            assert!(
                (after / before - 0.25).abs() <= 1e-9,
                "contraction {} at round {k}",
                after / before
            );
        }
    }

    #[test]
    fn optimal_pair_is_stationary() {
        let mut rng = Rng::from_seed(6);
        let h = CMat::from_fn(3, 4, |_, _| rng.cgauss()).unwrap();
        let (f_opt, z_opt, _) = crate::channel::optimal_pair(&h).unwrap();
        let link = LinkParams {
            rho_o: 1.0,
            rho_e: 1.0,
            noiseless: true,
        };
        let mut a = SimplePowerAligner::new(3, 4, f_opt.clone(), z_opt.clone()).unwrap();
        round_trip(&mut a, &h, &link, 9);
        // Stationary up to a global phase.
        assert!((a.ping_beam().dot(&f_opt).unwrap().norm() - 1.0).abs() < 1e-10);
        assert!((a.pong_beam().dot(&z_opt).unwrap().norm() - 1.0).abs() < 1e-10);
    }
}
