//! Simulation and analysis of a single atom in an optical dipole trap:
//! release-and-recapture thermometry, adiabatic-lowering spectroscopy,
//! truncated-Boltzmann filtering and adiabatic cooling.
//!
//! The crate is organized bottom-up: [`trap`] builds the gravity-tilted
//! potential, [`sample`] draws initial phase-space ensembles, [`flight`] runs
//! the release-and-recapture Monte-Carlo, [`thermometry`] fits temperatures
//! to recapture curves, [`adiabatic`] handles the constant-action energy
//! mapping and ramp checks, and [`analytics`] holds the closed-form
//! Boltzmann statistics. [`harness`] wires everything into config-driven
//! sweeps with CSV and JSON output.

pub mod adiabatic;
pub mod analytics;
pub mod constants;
pub mod flight;
pub mod harness;
pub mod numeric;
pub mod rng;
pub mod sample;
pub mod thermometry;
pub mod trap;

pub use adiabatic::{
    action_1d, adiabatic_temperature, build_action_map, check_adiabaticity, hold_time_check,
    map_energy, map_escape_energy, ActionMapTable, RampProfile, RampShape,
};
pub use analytics::{f_th, mean_energy_truncated, motion_figures, p_surv, MotionFigures};
pub use flight::{simulate_rr, EnergySource, RRCurve, RRPoint, SimPlan};
pub use rng::RngSeed;
pub use sample::{sample_thermal, sample_truncated, PhaseSpaceState, ThermalSpec, TruncatedSpec};
pub use thermometry::{chi_square, fit_temperature, parabola_vertex, FitModel, FitOptions, FitResult};
pub use trap::{build_potential, potential_at_depth, potential_energy, TrapConfig, TrapPotential};
