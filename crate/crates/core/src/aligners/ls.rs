//! Batch and sequential least-squares beam alignment.
//!
//! Both nodes solve the same estimation problem in a common orientation:
//! given beam/observation pairs `(b_i, y_i)` with `y_i = sqrt(rho) G b_i + n_i`,
//! estimate `G`. Node 2 estimates the downlink matrix from `(f, y_o)` pairs;
//! node 1 estimates the adjoint of the uplink matrix from `(z, conj(y_e))`
//! pairs, which has the identical form. The batch solution is
//! `G = Y B† / sqrt(rho)` with the Gram branch picked by the shape of the
//! beam history; the sequential form applies the matrix-inversion lemma to
//! fold in one new pair per round at `O(M^2)` cost and is algebraically
//! identical to the batch solution once the history reaches full rank.

use crate::numerics::{hermitian_psd_inverse, lstsq_min_norm, CMat, CVec, Complex64};
use crate::pingpong::FeedbackLog;
use crate::{Error, Result};
use alloc::vec::Vec;
#[cfg_attr(test, allow(unused_imports))] // inherent f64 methods win when std is linked
use num_traits::Float;

use super::PingPongAligner;

/// Batch least-squares estimate from the full history: `G = Y B† / sqrt(rho)`.
///
/// `beams` are the transmitted unit vectors (columns of `B`), `observations`
/// the corresponding received vectors (columns of `Y`).
pub fn batch_ls_estimate(beams: &[CVec], observations: &[CVec], rho: f64) -> Result<CMat> {
    if beams.is_empty() || beams.len() != observations.len() {
        return Err(Error::InvalidDimension {
            what: "batch history length",
            got: beams.len().min(observations.len()),
        });
    }
    if !(rho.is_finite() && rho > 0.0) {
        return Err(Error::ContractViolation {
            what: "least squares needs a positive SNR",
            value: rho,
        });
    }
    let b = CMat::from_cols(beams)?;
    let y = CMat::from_cols(observations)?;
    // G* = (B*)† Y*, so G = lstsq(B*, Y*)* — the Gram branch inside the
    // solver matches the tall/wide split of the normal equations.
    let g_adj = lstsq_min_norm(&b.adjoint(), &y.adjoint())?;
    Ok(g_adj.adjoint().scale_re(1.0 / rho.sqrt()))
}

/// Sequential least-squares estimator state: current estimate plus the
/// inverse-Gram covariance it propagates.
#[derive(Debug, Clone)]
pub struct SeqLsEstimator {
    h_hat: CMat,
    cov: CMat,
    sqrt_rho_inv: f64,
}

impl SeqLsEstimator {
    /// Start from an existing estimate and covariance (batch handoff).
    pub fn new(h_hat: CMat, cov: CMat, rho: f64) -> Result<Self> {
        if cov.rows() != cov.cols() || cov.rows() != h_hat.cols() {
            return Err(Error::DimMismatch {
                op: "SeqLsEstimator::new",
                left: (h_hat.rows(), h_hat.cols()),
                right: (cov.rows(), cov.cols()),
            });
        }
        if !(rho.is_finite() && rho > 0.0) {
            return Err(Error::ContractViolation {
                what: "least squares needs a positive SNR",
                value: rho,
            });
        }
        Ok(SeqLsEstimator {
            h_hat,
            cov,
            sqrt_rho_inv: 1.0 / rho.sqrt(),
        })
    }

    /// Rank-one initialization from the first beam/observation pair with
    /// covariance `alpha * I`.
    pub fn rank_one_init(beam: &CVec, obs: &CVec, rho: f64, alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::ContractViolation {
                what: "covariance init alpha must be positive",
                value: alpha,
            });
        }
        let sqrt_rho_inv = {
            if !(rho.is_finite() && rho > 0.0) {
                return Err(Error::ContractViolation {
                    what: "least squares needs a positive SNR",
                    value: rho,
                });
            }
            1.0 / rho.sqrt()
        };
        let h_hat = CMat::outer(&obs.scale_re(sqrt_rho_inv), beam);
        let cov = CMat::identity(beam.len())?.scale_re(alpha);
        Ok(SeqLsEstimator {
            h_hat,
            cov,
            sqrt_rho_inv,
        })
    }

    /// Fold in one beam/observation pair:
    /// gain row `K = b*C / (1 + b*C b)`, estimate update
    /// `G += (y/sqrt(rho) - G b) K`, covariance `C <- C (I - b K)`,
    /// re-symmetrized to suppress Hermitian drift.
    pub fn update(&mut self, beam: &CVec, obs: &CVec) -> Result<()> {
        let cb = self.cov.mul_vec(beam)?;
        let denom = 1.0 + beam.dot(&cb)?.re;
        if !(denom.is_finite() && denom > 0.0) {
            return Err(Error::Degenerate {
                what: "sequential least-squares gain denominator",
            });
        }
        let resid = obs
            .scale_re(self.sqrt_rho_inv)
            .sub(&self.h_hat.mul_vec(beam)?)?;
        let inv = Complex64::new(1.0 / denom, 0.0);
        self.h_hat.add_scaled_outer(&resid, &cb, inv)?;
        self.cov.add_scaled_outer(&cb, &cb, -inv)?;
        self.cov.symmetrize();
        Ok(())
    }

    pub fn estimate(&self) -> &CMat {
        &self.h_hat
    }

    pub fn covariance(&self) -> &CMat {
        &self.cov
    }
}

/// Strategy for one node's channel estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LsVariant {
    /// Batch solve every round.
    Batch,
    /// Batch for the node's first `M` rounds, sequential afterwards.
    Optimal,
    /// Sequential from round 0 with rank-one init and `alpha * I` covariance.
    Suboptimal { alpha: f64 },
}

/// One node's estimator: beams of dimension `m_in`, observations of
/// dimension `m_out`.
#[derive(Debug, Clone)]
struct LsNode {
    m_in: usize,
    variant: LsVariant,
    rho: f64,
    sqrt_rho_inv: f64,
    beams: Vec<CVec>,
    obs_scaled: Vec<CVec>,
    /// Running `Y B*` (m_out x m_in).
    a_sum: CMat,
    /// Running `B B*` (m_in x m_in).
    gram: CMat,
    batch_estimate: Option<CMat>,
    seq: Option<SeqLsEstimator>,
}

impl LsNode {
    fn new(m_in: usize, m_out: usize, variant: LsVariant, rho: f64) -> Result<Self> {
        if !(rho.is_finite() && rho > 0.0) {
            return Err(Error::ContractViolation {
                what: "least squares needs a positive SNR",
                value: rho,
            });
        }
        Ok(LsNode {
            m_in,
            variant,
            rho,
            sqrt_rho_inv: 1.0 / rho.sqrt(),
            beams: Vec::new(),
            obs_scaled: Vec::new(),
            a_sum: CMat::zeros(m_out, m_in)?,
            gram: CMat::zeros(m_in, m_in)?,
            batch_estimate: None,
            seq: None,
        })
    }

    fn ingest(&mut self, beam: &CVec, obs: &CVec) -> Result<()> {
        match self.variant {
            LsVariant::Suboptimal { alpha } => match self.seq.as_mut() {
                None => {
                    self.seq = Some(SeqLsEstimator::rank_one_init(beam, obs, self.rho, alpha)?);
                    Ok(())
                }
                Some(seq) => seq.update(beam, obs),
            },
            LsVariant::Batch => self.batch_ingest(beam, obs),
            LsVariant::Optimal => {
                if let Some(seq) = self.seq.as_mut() {
                    return seq.update(beam, obs);
                }
                self.batch_ingest(beam, obs)?;
                if self.beams.len() == self.m_in {
                    // Handoff: the square-history Gram is invertible, so the
                    // sequential recursion continues the batch solution.
                    let cov = hermitian_psd_inverse(&self.gram)?;
                    let est = self
                        .batch_estimate
                        .clone()
                        .expect("batch estimate exists after ingest");
                    self.seq = Some(SeqLsEstimator::new(est, cov, self.rho)?);
                    self.beams = Vec::new();
                    self.obs_scaled = Vec::new();
                }
                Ok(())
            }
        }
    }

    fn batch_ingest(&mut self, beam: &CVec, obs: &CVec) -> Result<()> {
        let obs_s = obs.scale_re(self.sqrt_rho_inv);
        self.a_sum.add_scaled_outer(&obs_s, beam, Complex64::ONE)?;
        self.gram.add_scaled_outer(beam, beam, Complex64::ONE)?;
        self.beams.push(beam.clone());
        self.obs_scaled.push(obs_s);

        let cols = self.beams.len();
        let estimate = if cols >= self.m_in {
            // Wide/square history: G = (Y B*) (B B*)^{-1}.
            self.a_sum.matmul(&hermitian_psd_inverse(&self.gram)?)?
        } else {
            // Tall history: G = Y (B*B)^{-1} B*.
            let b = CMat::from_cols(&self.beams)?;
            let y = CMat::from_cols(&self.obs_scaled)?;
            let w = b.adjoint().matmul(&b)?;
            let winv = hermitian_psd_inverse(&w)?;
            y.matmul(&winv)?.matmul(&b.adjoint())?
        };
        self.batch_estimate = Some(estimate);
        Ok(())
    }

    fn estimate(&self) -> &CMat {
        match (&self.seq, &self.batch_estimate) {
            (Some(seq), _) => seq.estimate(),
            (None, Some(batch)) => batch,
            (None, None) => unreachable!("estimate queried before first ingest"),
        }
    }
}

/// Least-squares ping-pong aligner (batch, optimal-sequential, or
/// suboptimal-sequential variant).
pub struct LsAligner {
    f_cur: CVec,
    z_cur: CVec,
    node2: LsNode,
    node1: LsNode,
}

impl LsAligner {
    pub fn new(
        variant: LsVariant,
        m_r: usize,
        m_t: usize,
        f0: CVec,
        z0: CVec,
        rho_o: f64,
        rho_e: f64,
    ) -> Result<Self> {
        Ok(LsAligner {
            f_cur: f0,
            z_cur: z0,
            node2: LsNode::new(m_t, m_r, variant, rho_o)?,
            node1: LsNode::new(m_r, m_t, variant, rho_e)?,
        })
    }

    /// Node 2's current downlink estimate.
    pub fn estimate_o(&self) -> &CMat {
        self.node2.estimate()
    }

    /// Node 1's current estimate of the adjoint uplink matrix.
    pub fn estimate_e_adj(&self) -> &CMat {
        self.node1.estimate()
    }
}

impl PingPongAligner for LsAligner {
    fn ping_beam(&self) -> &CVec {
        &self.f_cur
    }

    fn observe_ping(&mut self, k: usize, y_o: &CVec, fb: &mut FeedbackLog) -> Result<()> {
        // f[0] is derived from the shared seed at both nodes; every later
        // beam must be fed forward for the estimator update.
        let f = if k >= 1 {
            fb.transfer(&self.f_cur)
        } else {
            self.f_cur.clone()
        };
        self.node2.ingest(&f, y_o)?;
        self.z_cur = self.node2.estimate().mul_vec(&f)?.normalized()?;
        Ok(())
    }

    fn pong_beam(&self) -> &CVec {
        &self.z_cur
    }

    fn observe_pong(&mut self, _k: usize, y_e: &CVec, fb: &mut FeedbackLog) -> Result<()> {
        let z = fb.transfer(&self.z_cur);
        self.node1.ingest(&z, &y_e.conj())?;
        self.f_cur = self.node1.estimate().mul_vec(&z)?.normalized()?;
        Ok(())
    }
}
