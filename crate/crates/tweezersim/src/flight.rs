//! Release-and-recapture Monte-Carlo.
//!
//! An atom is released, falls ballistically for a time dt, and is recaptured
//! if its total energy at the landing point (exact potential, not the
//! harmonic form) is below the gravity-limited effective trap depth.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::RngSeed;
use crate::sample::{sample_thermal, sample_truncated, PhaseSpaceState, ThermalSpec, TruncatedSpec};
use crate::trap::{potential_energy, GravityAxis, TrapConfig, TrapPotential};

#[derive(Error, Debug)]
pub enum FlightError {
    #[error("invalid simulation plan: {0}")]
    InvalidPlan(String),
}

/// One point of a recapture curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RRPoint {
    /// Release time, s.
    pub dt: f64,
    /// Recapture probability.
    pub p: f64,
    /// One-sigma uncertainty on `p`.
    pub sigma: f64,
    /// Number of sequences (or trajectories) behind this point.
    pub n_sequences: u64,
}

/// Measured or simulated recapture probability versus release time.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RRCurve {
    pub points: Vec<RRPoint>,
}

impl RRCurve {
    pub fn validate(&self) -> Result<(), FlightError> {
        for pt in &self.points {
            if !(0.0..=1.0).contains(&pt.p) || pt.sigma < 0.0 || !pt.dt.is_finite() {
                return Err(FlightError::InvalidPlan(format!(
                    "bad curve point at dt = {}",
                    pt.dt
                )));
            }
        }
        for pair in self.points.windows(2) {
            if pair[1].dt <= pair[0].dt {
                return Err(FlightError::InvalidPlan(
                    "release times must be strictly increasing".to_string(),
                ));
            }
        }
        Ok(())
    }

    pub fn dt_values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.dt).collect()
    }
}

/// Initial-state distribution for a simulation.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub enum EnergySource {
    Thermal(ThermalSpec),
    Truncated(TruncatedSpec),
}

impl EnergySource {
    pub fn sample(&self, pot: &TrapPotential, cfg: &TrapConfig, seed: RngSeed) -> PhaseSpaceState {
        match self {
            EnergySource::Thermal(spec) => sample_thermal(spec, pot, cfg, seed),
            EnergySource::Truncated(spec) => sample_truncated(spec, pot, cfg, seed),
        }
    }
}

/// Monte-Carlo plan for one recapture curve.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimPlan {
    pub n_trajectories: u64,
    /// Release time grid, s, strictly increasing.
    pub dt_grid: Vec<f64>,
    pub source: EnergySource,
    /// Plateau factor in (0, 1] multiplying the simulated probability.
    pub scale: f64,
}

impl SimPlan {
    pub fn validate(&self) -> Result<(), FlightError> {
        if self.n_trajectories < 1 {
            return Err(FlightError::InvalidPlan("n_trajectories must be >= 1".into()));
        }
        if !(self.scale > 0.0 && self.scale <= 1.0) {
            return Err(FlightError::InvalidPlan("scale must be in (0, 1]".into()));
        }
        if self.dt_grid.is_empty() {
            return Err(FlightError::InvalidPlan("empty release-time grid".into()));
        }
        for pair in self.dt_grid.windows(2) {
            if pair[1] <= pair[0] {
                return Err(FlightError::InvalidPlan(
                    "release times must be strictly increasing".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Ballistic free flight under gravity: a single closed-form step.
pub fn free_flight(state: &PhaseSpaceState, dt: f64, cfg: &TrapConfig) -> PhaseSpaceState {
    let g = cfg.gravity;
    let fall = 0.5 * g * dt * dt;
    let kick = g * dt;
    let mut out = PhaseSpaceState {
        x: state.x + state.vx * dt,
        y: state.y + state.vy * dt,
        z: state.z + state.vz * dt,
        vx: state.vx,
        vy: state.vy,
        vz: state.vz,
    };
    match cfg.gravity_axis {
        GravityAxis::X => {
            out.x -= fall;
            out.vx -= kick;
        }
        GravityAxis::Y => {
            out.y -= fall;
            out.vy -= kick;
        }
    }
    out
}

/// Recapture criterion: total energy below the effective trap depth.
pub fn is_recaptured(state: &PhaseSpaceState, pot: &TrapPotential, cfg: &TrapConfig) -> bool {
    let kinetic = 0.5 * cfg.atom_mass * state.speed_squared();
    kinetic + potential_energy(pot, cfg, state.x, state.y, state.z) < pot.effective_depth
}

/// Simulate a full recapture curve.
///
/// Trajectory i of release-time index k uses stream
/// `seed.stream_id + k * n + i`, so parallel and serial runs agree exactly.
pub fn simulate_rr(
    plan: &SimPlan,
    pot: &TrapPotential,
    cfg: &TrapConfig,
    seed: RngSeed,
) -> Result<RRCurve, FlightError> {
    plan.validate()?;
    let n = plan.n_trajectories;
    let points = plan
        .dt_grid
        .iter()
        .enumerate()
        .map(|(k, &dt)| {
            let base = seed.stream_id.wrapping_add(k as u64 * n);
            let hits: u64 = (0..n)
                .into_par_iter()
                .map(|i| {
                    let s = plan
                        .source
                        .sample(pot, cfg, seed.with_stream(base.wrapping_add(i)));
                    let landed = free_flight(&s, dt, cfg);
                    u64::from(is_recaptured(&landed, pot, cfg))
                })
                .sum();
            let phat = hits as f64 / n as f64;
            RRPoint {
                dt,
                p: plan.scale * phat,
                sigma: plan.scale * (phat * (1.0 - phat) / n as f64).sqrt(),
                n_sequences: n,
            }
        })
        .collect();
    Ok(RRCurve { points })
}
