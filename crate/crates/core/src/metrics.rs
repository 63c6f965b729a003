//! Figures of merit and the complexity/feedback cost accounting.

use crate::aligners::AlignerKind;
use crate::numerics::{CMat, CVec};
use crate::{Error, Result};
use alloc::format;
use alloc::string::String;
#[cfg_attr(test, allow(unused_imports))] // inherent f64 methods win when std is linked
use num_traits::Float;

/// Per-iteration measurement of one ping-pong run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub k: usize,
    /// `|z* H f|^2 / ‖H‖₂²`, in `[0, 1]` up to numerical slack.
    pub norm_gain: f64,
    /// `arccos |f_opt* f|`, in `[0, pi/2]`.
    pub angle_rad: f64,
    pub angle_sq: f64,
}

/// Effective channel gain `|z* H f|^2` for unit-norm `f`, `z`.
pub fn effective_gain(h: &CMat, f: &CVec, z: &CVec) -> Result<f64> {
    if h.cols() != f.len() || h.rows() != z.len() {
        return Err(Error::DimMismatch {
            op: "effective_gain",
            left: (h.rows(), h.cols()),
            right: (z.len(), f.len()),
        });
    }
    let hf = h.mul_vec(f)?;
    Ok(z.dot(&hf)?.norm_sqr())
}

/// Angle between beam directions: `arccos |a* b|`, invariant to a global
/// phase on either argument (the chordal distance on the beam manifold).
pub fn beam_angle(a: &CVec, b: &CVec) -> Result<f64> {
    let inner = a.dot(b)?.norm();
    if inner > 1.0 + 1e-9 {
        return Err(Error::ContractViolation {
            what: "beam_angle inner product above 1",
            value: inner,
        });
    }
    Ok(inner.min(1.0).acos())
}

/// Symbolic compute order plus exact feedback bits for one algorithm over
/// a `k_max`-iteration alignment phase. `b_bits` is the number of bits per
/// complex-valued element of a transferred beamforming vector.
#[derive(Debug, Clone, PartialEq)]
pub struct CostReport {
    pub algorithm: &'static str,
    pub flops_order: String,
    pub feedback_bits: u64,
}

pub fn cost_report(
    kind: &AlignerKind,
    k_max: usize,
    m_r: usize,
    m_t: usize,
    b_bits: u32,
) -> CostReport {
    let per_round_bits = b_bits as u64 * (m_r + m_t) as u64;
    let (flops_order, feedback_bits) = match kind {
        AlignerKind::SimplePower => (format!("{k_max} * O(M)"), 0),
        AlignerKind::SummedPower => (format!("{k_max} * O(M)"), 0),
        AlignerKind::BatchLs | AlignerKind::SlsOptimal | AlignerKind::SlsSuboptimal { .. } => (
            format!("{k_max} * O(M^3)"),
            k_max as u64 * per_round_bits,
        ),
        AlignerKind::Lisp { k_switch, .. } => (
            format!(
                "{k_switch} * O(M^3) + {} * O(M)",
                k_max.saturating_sub(*k_switch)
            ),
            *k_switch as u64 * per_round_bits,
        ),
        AlignerKind::PilotMmse { .. } => (String::from("O(M^3)"), 0),
    };
    CostReport {
        algorithm: kind.name(),
        flops_order,
        feedback_bits,
    }
}
