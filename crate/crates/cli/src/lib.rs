//! Monte Carlo experiment engine and file formats for the beam-alignment
//! library. The `beamalign` binary wraps this with a subcommand CLI.

pub mod config;
pub mod csvio;
pub mod harness;
pub mod plot;
pub mod report;

pub use harness::{
    run_monte_carlo, run_single, sweep_antennas, sweep_kswitch, sweep_snr, AggregateResult,
    AlgoCurve, HarnessError, RunOutput, SimConfig, SweepRow, SweepTable,
};
