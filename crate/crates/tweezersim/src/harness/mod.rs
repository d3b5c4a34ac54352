//! Config-driven experiment harness: flat key=value configs, synthetic data
//! generation, parameter sweeps, CSV/JSON output and the command-line entry
//! point.

pub mod cli;
pub mod config;
pub mod output;
pub mod sweep;
pub mod synth;
