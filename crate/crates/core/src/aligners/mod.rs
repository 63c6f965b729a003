//! Beam-alignment state machines.
//!
//! Every iterative aligner implements [`PingPongAligner`] and is driven one
//! channel use at a time: the runner transmits the aligner's current ping
//! beam, hands back the slot-1 observation, transmits the combiner the
//! aligner reports for the pong slot, and hands back the slot-2
//! observation. Aligners therefore see only observations and fed-back
//! vectors, never the channel itself.
//!
//! Round indexing: round `k` is channel use `k`. Algorithms with an
//! estimator-priming round (sequential least squares and LISP) treat
//! round 0 as their initialization exchange; the memoryless and summed
//! variants start accumulating immediately.

mod ls;
mod lisp;
mod pilot;
mod simple;
mod summed;
mod transition;

pub use ls::{batch_ls_estimate, LsAligner, LsVariant, SeqLsEstimator};
pub use lisp::LispAligner;
pub use pilot::{dft_matrix, pilot_mmse_run, PilotBeams};
pub use simple::SimplePowerAligner;
pub use summed::SummedPowerAligner;
pub use transition::{
    state_transition_basis_inverse, state_transition_eigendecomposition, state_transition_matrix,
};

use crate::numerics::CVec;
use crate::pingpong::FeedbackLog;
use crate::{Error, Result};
use alloc::boxed::Box;
use alloc::format;

/// Algorithm selector with per-algorithm parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum AlignerKind {
    /// Full batch least squares at every iteration.
    BatchLs,
    /// Batch least squares for each node's first `M` iterations, then the
    /// sequential (rank-one update) form.
    SlsOptimal,
    /// Sequential least squares from the start, primed with rank-one
    /// channel estimates and covariance `alpha * I`.
    SlsSuboptimal { alpha_init: f64 },
    /// Normalized running sum of received vectors; no feedback link.
    SummedPower,
    /// Sequential least squares for the first `k_switch` rounds, then the
    /// summed power method seeded with the primed beams.
    Lisp { k_switch: usize, alpha_init: f64 },
    /// Conjugate-normalize-retransmit baseline (BIMA).
    SimplePower,
    /// Pilot-based MMSE estimation benchmark over `k_max` training slots.
    PilotMmse { k_max: usize },
}

impl AlignerKind {
    /// Stable name used in CSV output and reports.
    pub fn name(&self) -> &'static str {
        match self {
            AlignerKind::BatchLs => "batch_ls",
            AlignerKind::SlsOptimal => "sls_optimal",
            AlignerKind::SlsSuboptimal { .. } => "sls_suboptimal",
            AlignerKind::SummedPower => "summed_power",
            AlignerKind::Lisp { .. } => "lisp",
            AlignerKind::SimplePower => "simple_power",
            AlignerKind::PilotMmse { .. } => "pilot_mmse",
        }
    }

    /// Position in the canonical output ordering.
    pub fn order_index(&self) -> usize {
        match self {
            AlignerKind::BatchLs => 0,
            AlignerKind::SlsOptimal => 1,
            AlignerKind::SlsSuboptimal { .. } => 2,
            AlignerKind::SummedPower => 3,
            AlignerKind::Lisp { .. } => 4,
            AlignerKind::SimplePower => 5,
            AlignerKind::PilotMmse { .. } => 6,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            AlignerKind::SlsSuboptimal { alpha_init } => {
                if !(alpha_init.is_finite() && *alpha_init > 0.0) {
                    return Err(Error::InvalidSpec {
                        what: format!("alpha_init must be positive, got {alpha_init}"),
                    });
                }
            }
            AlignerKind::Lisp {
                k_switch,
                alpha_init,
            } => {
                if *k_switch == 0 {
                    return Err(Error::InvalidSpec {
                        what: "k_switch must be at least 1".into(),
                    });
                }
                if !(alpha_init.is_finite() && *alpha_init > 0.0) {
                    return Err(Error::InvalidSpec {
                        what: format!("alpha_init must be positive, got {alpha_init}"),
                    });
                }
            }
            AlignerKind::PilotMmse { k_max: 0 } => {
                return Err(Error::InvalidSpec {
                    what: "pilot k_max must be at least 1".into(),
                });
            }
            _ => {}
        }
        Ok(())
    }
}

/// One ping-pong round, node 2 half-step then node 1 half-step.
///
/// The runner calls, in order: [`ping_beam`](PingPongAligner::ping_beam),
/// [`observe_ping`](PingPongAligner::observe_ping),
/// [`pong_beam`](PingPongAligner::pong_beam),
/// [`observe_pong`](PingPongAligner::observe_pong). Vector transfers over
/// the feedback link are routed through the [`FeedbackLog`] so instrumented
/// runs account for every exchanged element. The initial beam `f[0]` is
/// derived from the shared run seed at both nodes and costs nothing.
pub trait PingPongAligner {
    /// Transmit beamformer for the ping slot of the current round.
    fn ping_beam(&self) -> &CVec;

    /// Node-2 half-step: consume the slot-1 observation of round `k`.
    fn observe_ping(&mut self, k: usize, y_o: &CVec, fb: &mut FeedbackLog) -> Result<()>;

    /// Combiner in effect for the pong slot of round `k` (queried after
    /// the node-2 half-step).
    fn pong_beam(&self) -> &CVec;

    /// Node-1 half-step: consume the slot-2 observation of round `k`.
    fn observe_pong(&mut self, k: usize, y_e: &CVec, fb: &mut FeedbackLog) -> Result<()>;
}

/// Instantiate an iterative aligner. `f0`/`z0` are the shared random
/// initial beams; `rho_o`/`rho_e` are the SNRs the estimator assumes
/// (normally the physical link values; beamformers are invariant to a
/// common misreport).
#[allow(clippy::too_many_arguments)]
pub fn build_aligner(
    kind: &AlignerKind,
    m_r: usize,
    m_t: usize,
    f0: CVec,
    z0: CVec,
    rho_o: f64,
    rho_e: f64,
    lisp_zero_seeded_switch: bool,
) -> Result<Box<dyn PingPongAligner>> {
    kind.validate()?;
    if f0.len() != m_t || z0.len() != m_r {
        return Err(Error::DimMismatch {
            op: "build_aligner initial beams",
            left: (m_r, m_t),
            right: (z0.len(), f0.len()),
        });
    }
    Ok(match kind {
        AlignerKind::BatchLs => Box::new(LsAligner::new(
            LsVariant::Batch,
            m_r,
            m_t,
            f0,
            z0,
            rho_o,
            rho_e,
        )?),
        AlignerKind::SlsOptimal => Box::new(LsAligner::new(
            LsVariant::Optimal,
            m_r,
            m_t,
            f0,
            z0,
            rho_o,
            rho_e,
        )?),
        AlignerKind::SlsSuboptimal { alpha_init } => Box::new(LsAligner::new(
            LsVariant::Suboptimal { alpha: *alpha_init },
            m_r,
            m_t,
            f0,
            z0,
            rho_o,
            rho_e,
        )?),
        AlignerKind::SummedPower => Box::new(SummedPowerAligner::new(m_r, m_t, f0, z0)?),
        AlignerKind::Lisp {
            k_switch,
            alpha_init,
        } => Box::new(LispAligner::new(
            *k_switch,
            *alpha_init,
            m_r,
            m_t,
            f0,
            z0,
            rho_o,
            rho_e,
            lisp_zero_seeded_switch,
        )?),
        AlignerKind::SimplePower => Box::new(SimplePowerAligner::new(m_r, m_t, f0, z0)?),
        AlignerKind::PilotMmse { .. } => {
            return Err(Error::InvalidSpec {
                what: "pilot MMSE is a batch sounding scheme, not a ping-pong aligner".into(),
            })
        }
    })
}
