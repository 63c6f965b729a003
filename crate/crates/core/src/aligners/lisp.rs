//! Least-squares-initialized summed power (LISP).
//!
//! Runs the suboptimal sequential least-squares schedule for the priming
//! phase, then hands each node over to the summed power method. Node 2's
//! estimator keeps updating through round `k_switch` while node 1 stops
//! one round earlier (its last fed-back combiner is `z[k_switch - 1]`),
//! so exactly `k_switch` rounds use the feedback link.
//!
//! At the switch each node seeds its running sum with its primed beam
//! (unit magnitude; the growing sum dominates the gauge choice quickly).
//! The zero-seeded alternative starts the sums from zero instead.

use crate::numerics::CVec;
use crate::pingpong::FeedbackLog;
use crate::Result;

use super::ls::{LsAligner, LsVariant};
use super::PingPongAligner;

pub struct LispAligner {
    k_switch: usize,
    zero_seeded: bool,
    ls: LsAligner,
    f_cur: CVec,
    z_cur: CVec,
    s_e: Option<CVec>,
    s_o: Option<CVec>,
}

impl LispAligner {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        k_switch: usize,
        alpha_init: f64,
        m_r: usize,
        m_t: usize,
        f0: CVec,
        z0: CVec,
        rho_o: f64,
        rho_e: f64,
        zero_seeded_switch: bool,
    ) -> Result<Self> {
        let ls = LsAligner::new(
            LsVariant::Suboptimal { alpha: alpha_init },
            m_r,
            m_t,
            f0.clone(),
            z0.clone(),
            rho_o,
            rho_e,
        )?;
        Ok(LispAligner {
            k_switch,
            zero_seeded: zero_seeded_switch,
            ls,
            f_cur: f0,
            z_cur: z0,
            s_e: None,
            s_o: None,
        })
    }

    /// Running sums, present once the respective node has switched.
    pub fn sums(&self) -> (Option<&CVec>, Option<&CVec>) {
        (self.s_e.as_ref(), self.s_o.as_ref())
    }
}

impl PingPongAligner for LispAligner {
    fn ping_beam(&self) -> &CVec {
        &self.f_cur
    }

    fn observe_ping(&mut self, k: usize, y_o: &CVec, fb: &mut FeedbackLog) -> Result<()> {
        if k <= self.k_switch {
            self.ls.observe_ping(k, y_o, fb)?;
            self.z_cur = self.ls.pong_beam().clone();
        } else {
            if self.s_o.is_none() {
                self.s_o = Some(if self.zero_seeded {
                    CVec::zeros(self.z_cur.len())?
                } else {
                    self.z_cur.clone()
                });
            }
            let s_o = self.s_o.as_mut().expect("seeded above");
            if s_o.norm() > 0.0 {
                self.z_cur = s_o.normalized()?;
            }
            s_o.add_assign(y_o)?;
        }
        Ok(())
    }

    fn pong_beam(&self) -> &CVec {
        &self.z_cur
    }

    fn observe_pong(&mut self, k: usize, y_e: &CVec, fb: &mut FeedbackLog) -> Result<()> {
        if k < self.k_switch {
            self.ls.observe_pong(k, y_e, fb)?;
            self.f_cur = self.ls.ping_beam().clone();
        } else {
            if self.s_e.is_none() {
                self.s_e = Some(if self.zero_seeded {
                    CVec::zeros(self.f_cur.len())?
                } else {
                    self.f_cur.clone()
                });
            }
            let s_e = self.s_e.as_mut().expect("seeded above");
            s_e.add_assign(&y_e.conj())?;
            self.f_cur = s_e.normalized()?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{unit_random, CMat, Rng};
    use crate::pingpong::{ping, pong, LinkParams};

    struct MiniRun {
        h: CMat,
        link: LinkParams,
        seed: u64,
    }

    impl MiniRun {
        fn drive(
            &self,
            aligner: &mut dyn PingPongAligner,
            rounds: usize,
            fb: &mut FeedbackLog,
        ) -> alloc::vec::Vec<(CVec, CVec)> {
            let mut records = alloc::vec::Vec::new();
            for k in 0..=rounds {
                let mut rng1 = Rng::from_seed_stream(self.seed, 16 + 4 * k as u64 + 1);
                let y_o = ping(&self.h, aligner.ping_beam(), &self.link, &mut rng1).unwrap();
                let f_used = aligner.ping_beam().clone();
                aligner.observe_ping(k, &y_o, fb).unwrap();
                let z_used = aligner.pong_beam().clone();
                records.push((f_used, z_used.clone()));
                if k < rounds {
                    let mut rng2 = Rng::from_seed_stream(self.seed, 16 + 4 * k as u64 + 2);
                    let y_e = pong(&self.h, &z_used, &self.link, &mut rng2).unwrap();
                    aligner.observe_pong(k, &y_e, fb).unwrap();
                }
            }
            records
        }
    }

    fn setup(seed: u64) -> (MiniRun, CVec, CVec) {
        let mut rng = Rng::from_seed(seed);
        let h = CMat::from_fn(3, 6, |_, _| rng.cgauss()).unwrap();
        let f0 = unit_random(6, &mut rng).unwrap();
        let z0 = unit_random(3, &mut rng).unwrap();
        (
            MiniRun {
                h,
                link: LinkParams {
                    rho_o: 1.0,
                    rho_e: 1.0,
                    noiseless: false,
                },
                seed,
            },
            f0,
            z0,
        )
    }

    #[test]
    fn degenerate_switch_reproduces_suboptimal_sls() {
        let (run, f0, z0) = setup(11);
        let rounds = 10;
        let mut fb1 = FeedbackLog::new(16);
        let mut fb2 = FeedbackLog::new(16);
        let mut lisp = LispAligner::new(
            rounds, 1000.0, 3, 6, f0.clone(), z0.clone(), 1.0, 1.0, false,
        )
        .unwrap();
        let mut sls = LsAligner::new(
            LsVariant::Suboptimal { alpha: 1000.0 },
            3,
            6,
            f0,
            z0,
            1.0,
            1.0,
        )
        .unwrap();
        let rec_lisp = run.drive(&mut lisp, rounds, &mut fb1);
        let rec_sls = run.drive(&mut sls, rounds, &mut fb2);
        for (a, b) in rec_lisp.iter().zip(&rec_sls) {
            assert_eq!(a.0, b.0, "ping beams diverged");
            assert_eq!(a.1, b.1, "pong beams diverged");
        }
        assert_eq!(fb1.bits, fb2.bits);
    }

    #[test]
    fn prefix_is_bit_identical_before_switch() {
        let (run, f0, z0) = setup(13);
        let rounds = 12;
        let k_switch = 5;
        let mut fb1 = FeedbackLog::new(16);
        let mut fb2 = FeedbackLog::new(16);
        let mut lisp = LispAligner::new(
            k_switch, 1000.0, 3, 6, f0.clone(), z0.clone(), 1.0, 1.0, false,
        )
        .unwrap();
        let mut sls = LsAligner::new(
            LsVariant::Suboptimal { alpha: 1000.0 },
            3,
            6,
            f0,
            z0,
            1.0,
            1.0,
        )
        .unwrap();
        let rec_lisp = run.drive(&mut lisp, rounds, &mut fb1);
        let rec_sls = run.drive(&mut sls, rounds, &mut fb2);
        for k in 0..k_switch {
            assert_eq!(rec_lisp[k].0, rec_sls[k].0, "ping prefix diverged at {k}");
            assert_eq!(rec_lisp[k].1, rec_sls[k].1, "pong prefix diverged at {k}");
        }
        // After the switch the trajectories must differ.
        assert_ne!(rec_lisp[rounds].0, rec_sls[rounds].0);
    }

    #[test]
    fn switch_seeds_sums_with_primed_beams_and_accumulates_exactly() {
        // Post-switch dynamics are the summed recurrences seeded with the
        // primed beams: s_e = f[k_switch] + sum of conj(y_e), and
        // s_o = z[k_switch] + sum of y_o from its first summed round on.
        let (run, f0, z0) = setup(17);
        let k_switch = 3;
        let rounds = k_switch + 4;
        let mut fb = FeedbackLog::new(16);
        let mut lisp =
            LispAligner::new(k_switch, 1000.0, 3, 6, f0, z0, 1.0, 1.0, false).unwrap();

        let mut expected_s_e: Option<CVec> = None;
        let mut expected_s_o: Option<CVec> = None;
        for k in 0..=rounds {
            let mut rng1 = Rng::from_seed_stream(run.seed, 16 + 4 * k as u64 + 1);
            let y_o = ping(&run.h, lisp.ping_beam(), &run.link, &mut rng1).unwrap();
            if k == k_switch + 1 {
                // Node 2's first summed round seeds s_o with the last LS
                // combiner, then folds in this ping.
                expected_s_o = Some(lisp.pong_beam().clone());
            }
            lisp.observe_ping(k, &y_o, &mut fb).unwrap();
            if let Some(s) = expected_s_o.as_mut() {
                if k > k_switch {
                    s.add_assign(&y_o).unwrap();
                }
            }
            if k < rounds {
                let mut rng2 = Rng::from_seed_stream(run.seed, 16 + 4 * k as u64 + 2);
                let y_e = pong(&run.h, lisp.pong_beam(), &run.link, &mut rng2).unwrap();
                if k == k_switch {
                    // Node 1's first summed round seeds s_e with the primed
                    // transmit beam.
                    expected_s_e = Some(lisp.ping_beam().clone());
                }
                lisp.observe_pong(k, &y_e, &mut fb).unwrap();
                if let Some(s) = expected_s_e.as_mut() {
                    if k >= k_switch {
                        s.add_assign(&y_e.conj()).unwrap();
                        // The emitted beam is always the normalized sum.
                        let expect_f = s.normalized().unwrap();
                        assert!(lisp.ping_beam().sub(&expect_f).unwrap().norm() < 1e-13);
                    }
                }
            }
        }
        let (s_e, s_o) = lisp.sums();
        let s_e = s_e.expect("node 1 switched");
        let s_o = s_o.expect("node 2 switched");
        assert!(s_e.sub(&expected_s_e.unwrap()).unwrap().norm() < 1e-12);
        assert!(s_o.sub(&expected_s_o.unwrap()).unwrap().norm() < 1e-12);
    }

    #[test]
    fn zero_seeded_switch_starts_sums_from_zero() {
        let (run, f0, z0) = setup(19);
        let k_switch = 2;
        let rounds = k_switch + 2;
        let mut fb = FeedbackLog::new(16);
        let mut lisp =
            LispAligner::new(k_switch, 1000.0, 3, 6, f0, z0, 1.0, 1.0, true).unwrap();
        let mut pongs: alloc::vec::Vec<CVec> = alloc::vec::Vec::new();
        for k in 0..=rounds {
            let mut rng1 = Rng::from_seed_stream(run.seed, 16 + 4 * k as u64 + 1);
            let y_o = ping(&run.h, lisp.ping_beam(), &run.link, &mut rng1).unwrap();
            lisp.observe_ping(k, &y_o, &mut fb).unwrap();
            if k < rounds {
                let mut rng2 = Rng::from_seed_stream(run.seed, 16 + 4 * k as u64 + 2);
                let y_e = pong(&run.h, lisp.pong_beam(), &run.link, &mut rng2).unwrap();
                if k >= k_switch {
                    pongs.push(y_e.clone());
                }
                lisp.observe_pong(k, &y_e, &mut fb).unwrap();
            }
        }
        // Zero-seeded: s_e is exactly the sum of post-switch conjugated pongs.
        let mut expect = CVec::zeros(6).unwrap();
        for y in &pongs {
            expect.add_assign(&y.conj()).unwrap();
        }
        let (s_e, _) = lisp.sums();
        assert!(s_e.unwrap().sub(&expect).unwrap().norm() < 1e-12);
    }
}
