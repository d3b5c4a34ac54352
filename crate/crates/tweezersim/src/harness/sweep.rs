//! Depth sweeps: adiabatic-lowering spectroscopy, truncate-then-recapture
//! and adiabatic cooling. Each sweep point gets its own seed derived from
//! the master seed and the point index, so results do not depend on worker
//! count or on which other points run.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::adiabatic::{map_escape_energy, adiabatic_temperature, ActionError};
use crate::analytics::{mean_energy_truncated, p_surv};
use crate::constants::KB;
use crate::flight::{EnergySource, FlightError, RRCurve, SimPlan};
use crate::harness::config::{ConfigError, ExperimentConfig};
use crate::harness::synth::synth_experiment;
use crate::numeric::linspace;
use crate::rng::{mix, RngSeed};
use crate::sample::{ThermalSpec, TruncatedSpec};
use crate::thermometry::{fit_temperature, FitError, FitModel, FitOptions, FitResult};
use crate::trap::{potential_at_depth, TrapConfig, TrapError, TrapPotential};

#[derive(Error, Debug)]
pub enum SweepError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Trap(#[from] TrapError),
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Flight(#[from] FlightError),
    #[error(transparent)]
    Fit(#[from] FitError),
    #[error("u_min {0:.6e} J exceeds the initial depth {1:.6e} J")]
    UMinAboveInitial(f64, f64),
}

/// One table of sweep output.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepResult {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub seed: u64,
    pub n_sequences: u64,
}

fn columns(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Mean of the four smallest release-time points (the zero-release-time
/// recapture estimate).
pub fn p_rr_zero(curve: &RRCurve) -> f64 {
    let k = curve.points.len().min(4);
    if k == 0 {
        return 0.0;
    }
    curve.points.iter().take(k).map(|p| p.p).sum::<f64>() / k as f64
}

/// Temperature fit on an auto grid centered on `center`, widening the grid
/// when the chi-square minimum lands on the edge.
pub fn fit_around(
    data: &RRCurve,
    pot: &TrapPotential,
    cfg: &TrapConfig,
    center: f64,
    opts: &FitOptions,
    seed: RngSeed,
) -> Result<FitResult, FitError> {
    let mut half_span: f64 = 0.6;
    for _ in 0..3 {
        let grid = linspace(center * (1.0 - half_span).max(0.05), center * (1.0 + half_span), 11);
        match fit_temperature(data, pot, cfg, &grid, opts, seed) {
            Err(FitError::GridDoesNotBracket(_)) => half_span *= 1.8,
            other => return other,
        }
    }
    // last resort: a wide grid, accepting the flat high-temperature limit of
    // strongly truncated ensembles at the upper edge
    let grid = linspace(center * 0.05, center * 4.0, 15);
    let opts_edge = FitOptions {
        clamp_upper_edge: true,
        ..*opts
    };
    fit_temperature(data, pot, cfg, &grid, &opts_edge, seed)
}

/// Adiabatic-lowering spectroscopy: purely analytic survival curve.
///
/// For each minimum depth the constant-action map gives the initial energy
/// above which the atom escapes; the survival is the thermal cumulative
/// below that energy, plateau-scaled. Columns: `u_min_uK`, `p_rr0` (the
/// survival), `e_i_uK` (the mapped escape energy in the initial trap) and
/// `cumulative` (the unscaled thermal fraction).
pub fn run_spectroscopy_sweep(cfg: &ExperimentConfig) -> Result<SweepResult, SweepError> {
    let (tc, _pot) = cfg.build_trap()?;
    let u_i = cfg.depth;
    let t = cfg.temperature;
    let mut rows = Vec::with_capacity(cfg.u_min_grid.len());
    for &u_min in &cfg.u_min_grid {
        if u_min > u_i * (1.0 + 1e-12) {
            return Err(SweepError::UMinAboveInitial(u_min, u_i));
        }
        let (e_i, cumulative) = match map_escape_energy(u_min.min(u_i), u_i, &tc) {
            Ok(e_i) => (e_i, p_surv(e_i, t)),
            // below the no-barrier threshold nothing survives
            Err(ActionError::Trap(TrapError::NoBarrier { .. })) => (0.0, 0.0),
            Err(err) => return Err(err.into()),
        };
        rows.push(vec![
            u_min / KB * 1e6,
            cfg.scale * cumulative,
            e_i / KB * 1e6,
            cumulative,
        ]);
    }
    Ok(SweepResult {
        columns: columns(&["u_min_uK", "p_rr0", "e_i_uK", "cumulative"]),
        rows,
        seed: cfg.seed,
        n_sequences: cfg.n_sequences,
    })
}

/// Truncate-then-recapture: lower to `u_min`, hold, restore, then run
/// release-and-recapture thermometry on the surviving (truncated) ensemble.
/// Columns: `u_min_uK`, `p_rr0`, `t_uK`, `sigma_t_uK`, `e_mean_uK`.
pub fn run_truncation_sweep(cfg: &ExperimentConfig) -> Result<SweepResult, SweepError> {
    let (tc, pot) = cfg.build_trap()?;
    let u_i = cfg.depth;
    let t_i = cfg.temperature;
    let mut rows = Vec::with_capacity(cfg.u_min_grid.len());
    for (j, &u_min) in cfg.u_min_grid.iter().enumerate() {
        if u_min > u_i * (1.0 + 1e-12) {
            return Err(SweepError::UMinAboveInitial(u_min, u_i));
        }
        let u_trunc = match map_escape_energy(u_min.min(u_i), u_i, &tc) {
            Ok(e) => e,
            Err(ActionError::Trap(TrapError::NoBarrier { .. })) => {
                rows.push(vec![u_min / KB * 1e6, 0.0, 0.0, 0.0, 0.0]);
                continue;
            }
            Err(err) => return Err(err.into()),
        };
        let survival = p_surv(u_trunc, t_i);
        let data_seed = RngSeed::new(mix(cfg.seed, j as u64), 0);
        let fit_seed = RngSeed::new(mix(mix(cfg.seed, j as u64), 0x0f1e), 0);
        let plan = SimPlan {
            n_trajectories: cfg.n_trajectories,
            dt_grid: cfg.dt_grid.clone(),
            source: EnergySource::Truncated(TruncatedSpec {
                temperature: t_i,
                truncation_energy: u_trunc,
                n_bins: cfg.n_bins,
            }),
            scale: cfg.scale,
        };
        let data = synth_experiment(&plan, cfg.n_sequences, &pot, &tc, data_seed)?;
        let opts = FitOptions {
            n_trajectories: cfg.n_trajectories,
            scale: cfg.scale,
            model: FitModel::Truncated {
                truncation_energy: u_trunc,
                n_bins: cfg.n_bins,
            },
            fit_plateau: false,
            clamp_upper_edge: false,
        };
        let fit = fit_around(&data, &pot, &tc, t_i, &opts, fit_seed)?;
        let e_mean = mean_energy_truncated(fit.t_best, u_trunc);
        rows.push(vec![
            u_min / KB * 1e6,
            survival * p_rr_zero(&data),
            fit.t_best * 1e6,
            fit.sigma_t * 1e6,
            e_mean / KB * 1e6,
        ]);
    }
    Ok(SweepResult {
        columns: columns(&["u_min_uK", "p_rr0", "t_uK", "sigma_t_uK", "e_mean_uK"]),
        rows,
        seed: cfg.seed,
        n_sequences: cfg.n_sequences,
    })
}

/// Adiabatic cooling: lower to `u_min` slowly, measure the temperature
/// there. The ensemble temperature follows the T/sqrt(U) law; release times
/// are rescaled per point to track the slower dynamics of shallow traps.
/// Columns: `u_min_uK`, `p_rr0`, `t_uK`, `sigma_t_uK`, `e_mean_uK`,
/// `t_pred_uK`.
pub fn run_adiabatic_sweep(cfg: &ExperimentConfig) -> Result<SweepResult, SweepError> {
    let (tc, _) = cfg.build_trap()?;
    let u_i = cfg.depth;
    let t_i = cfg.temperature;
    let mut rows = Vec::with_capacity(cfg.u_min_grid.len());
    for (j, &u_min) in cfg.u_min_grid.iter().enumerate() {
        if u_min > u_i * (1.0 + 1e-12) {
            return Err(SweepError::UMinAboveInitial(u_min, u_i));
        }
        let t_pred = adiabatic_temperature(t_i, u_i, u_min);
        let (tc_min, pot_min) = match potential_at_depth(&tc, u_min) {
            Ok(pair) => pair,
            Err(TrapError::NoBarrier { .. }) => {
                rows.push(vec![u_min / KB * 1e6, 0.0, 0.0, 0.0, 0.0, t_pred * 1e6]);
                continue;
            }
            Err(err) => return Err(err.into()),
        };
        // release times spanning the decay of the shallow-trap curve
        let sigma_v = (KB * t_pred / tc.atom_mass).sqrt();
        let dt_grid = linspace(0.0, 4.0 * tc.waist / sigma_v, cfg.dt_grid.len().max(11));
        let data_seed = RngSeed::new(mix(cfg.seed, j as u64), 0);
        let fit_seed = RngSeed::new(mix(mix(cfg.seed, j as u64), 0x0f1e), 0);
        let plan = SimPlan {
            n_trajectories: cfg.n_trajectories,
            dt_grid,
            source: EnergySource::Thermal(ThermalSpec { temperature: t_pred }),
            scale: cfg.scale,
        };
        let data = synth_experiment(&plan, cfg.n_sequences, &pot_min, &tc_min, data_seed)?;
        let opts = FitOptions {
            n_trajectories: cfg.n_trajectories,
            scale: cfg.scale,
            model: FitModel::Thermal,
            fit_plateau: false,
            clamp_upper_edge: false,
        };
        let fit = fit_around(&data, &pot_min, &tc_min, t_pred, &opts, fit_seed)?;
        rows.push(vec![
            u_min / KB * 1e6,
            p_rr_zero(&data),
            fit.t_best * 1e6,
            fit.sigma_t * 1e6,
            3.0 * fit.t_best * 1e6,
            t_pred * 1e6,
        ]);
    }
    Ok(SweepResult {
        columns: columns(&[
            "u_min_uK",
            "p_rr0",
            "t_uK",
            "sigma_t_uK",
            "e_mean_uK",
            "t_pred_uK",
        ]),
        rows,
        seed: cfg.seed,
        n_sequences: cfg.n_sequences,
    })
}
