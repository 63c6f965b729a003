//! Summed power method: each node's next beam is the normalized running
//! sum of everything it has received, averaging noise across iterations.
//! No feedback link is used.
//!
//! The combiner transmitted in the pong slot of round `k` is the
//! normalized sum of pings 0..k-1 (the round-`k` ping has not yet been
//! folded in when the pong goes out), matching the state-space recursion
//! `s_o[k] = s_o[k-1] + y_o[k]`, `z[k] = s_o[k-1] / ‖s_o[k-1]‖`.

use crate::numerics::CVec;
use crate::pingpong::FeedbackLog;
use crate::Result;

use super::PingPongAligner;

pub struct SummedPowerAligner {
    f_cur: CVec,
    z_cur: CVec,
    s_e: CVec,
    s_o: CVec,
    pings_seen: usize,
}

impl SummedPowerAligner {
    pub fn new(m_r: usize, m_t: usize, f0: CVec, z0: CVec) -> Result<Self> {
        Ok(SummedPowerAligner {
            f_cur: f0,
            z_cur: z0,
            s_e: CVec::zeros(m_t)?,
            s_o: CVec::zeros(m_r)?,
            pings_seen: 0,
        })
    }

    /// Running sum at node 1 (transmit side).
    pub fn sum_e(&self) -> &CVec {
        &self.s_e
    }

    /// Running sum at node 2 (receive side).
    pub fn sum_o(&self) -> &CVec {
        &self.s_o
    }
}

impl PingPongAligner for SummedPowerAligner {
    fn ping_beam(&self) -> &CVec {
        &self.f_cur
    }

    fn observe_ping(&mut self, _k: usize, y_o: &CVec, _fb: &mut FeedbackLog) -> Result<()> {
        if self.pings_seen > 0 {
            self.z_cur = self.s_o.normalized()?;
        }
        self.s_o.add_assign(y_o)?;
        self.pings_seen += 1;
        Ok(())
    }

    fn pong_beam(&self) -> &CVec {
        &self.z_cur
    }

    fn observe_pong(&mut self, _k: usize, y_e: &CVec, _fb: &mut FeedbackLog) -> Result<()> {
        self.s_e.add_assign(&y_e.conj())?;
        self.f_cur = self.s_e.normalized()?;
        Ok(())
    }
}
