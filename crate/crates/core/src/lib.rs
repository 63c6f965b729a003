//! Iterative beam alignment for reciprocal TDD MIMO channels.
//!
//! Two nodes with `M_t` and `M_r` antennas cooperatively estimate the
//! dominant singular vectors of an unknown channel matrix `H` by exchanging
//! training symbols in alternating ping-pong slots. This crate provides the
//! pieces needed to simulate that process end to end:
//!
//! - [`numerics`]: dense complex vectors/matrices, seeded RNG streams,
//!   minimum-norm least-squares solves, and dominant singular pair
//!   extraction (the ground-truth oracle).
//! - [`channel`]: i.i.d. Rayleigh, sparse clustered mmWave, and real
//!   diagonal channel models, each sampled together with its optimal
//!   beamformer/combiner pair.
//! - [`pingpong`]: the two-slot observation model and the ideal feedback
//!   conduit with bit accounting. Aligners only ever see observations that
//!   pass through this boundary.
//! - [`aligners`]: the alignment state machines — batch and sequential
//!   least squares, the summed power method, the least-squares-initialized
//!   summed power (LISP) hybrid, the memoryless simple power baseline, and
//!   a pilot-based MMSE benchmark.
//! - [`metrics`]: normalized effective gain, beam angle, and the
//!   complexity/feedback cost report.
//!
//! The crate is `no_std` (with `alloc`) so the algorithmic core stays free
//! of platform dependencies; IO, configuration, and the Monte Carlo driver
//! live in the companion `beamalign` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod aligners;
pub mod channel;
mod error;
pub mod metrics;
pub mod numerics;
pub mod pingpong;

pub use error::{Error, Result};
