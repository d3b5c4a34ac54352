//! Adiabatic-invariant machinery: the 1-D action integral along the
//! gravity-tilted radial cut, the constant-action escape-energy mapping,
//! the T/sqrt(U) scaling law and the ramp adiabaticity check.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numeric::{adaptive_simpson, bisect};
use crate::trap::{potential_at_depth, potential_energy, GravityAxis, TrapConfig, TrapError, TrapPotential};

#[derive(Error, Debug)]
pub enum ActionError {
    #[error("energy must be positive, got {0:.6e} J")]
    NonPositiveEnergy(f64),
    #[error("energy {energy:.6e} J exceeds the barrier height {barrier:.6e} J: unbounded motion")]
    ExceedsBarrier { energy: f64, barrier: f64 },
    #[error("constant-action equation has no bracketed root (target action {target:.6e} J*s)")]
    NoRootBracketed { target: f64 },
    #[error("ramp needs at least 3 samples")]
    RampTooShort,
    #[error("invalid ramp: {0}")]
    InvalidRamp(String),
    #[error(transparent)]
    Trap(#[from] TrapError),
}

/// Half-axis action integral for an arbitrary 1-D potential well.
///
/// `v` must vanish at `q_start` (the minimum) and reach at least `e` at
/// `q_limit`. Integrates sqrt(2 m [E - V]) from the minimum to the outer
/// turning point, smoothing the inverse-square-root turning-point
/// singularity with the substitution q = q_start + (q_t - q_start) sin^2().
pub fn action_half_axis<F: Fn(f64) -> f64>(
    e: f64,
    mass: f64,
    v: F,
    q_start: f64,
    q_limit: f64,
) -> Result<f64, ActionError> {
    if !(e > 0.0) {
        return Err(ActionError::NonPositiveEnergy(e));
    }
    let v_limit = v(q_limit);
    if v_limit < e {
        return Err(ActionError::ExceedsBarrier {
            energy: e,
            barrier: v_limit,
        });
    }
    let span = (q_limit - q_start).abs();
    let q_turn = bisect(|q| v(q) - e, q_start, q_limit, 1e-15 * span.max(1e-30));
    let delta = q_turn - q_start;
    let integrand = |theta: f64| {
        let s = theta.sin();
        let q = q_start + delta * s * s;
        let rad = (2.0 * mass * (e - v(q)).max(0.0)).sqrt();
        rad * delta.abs() * (2.0 * theta).sin()
    };
    let coarse = adaptive_simpson(&integrand, 0.0, std::f64::consts::FRAC_PI_2, f64::INFINITY);
    let eps = 1e-11 * coarse.abs().max(1e-300);
    Ok(adaptive_simpson(&integrand, 0.0, std::f64::consts::FRAC_PI_2, eps))
}

fn gravity_axis_cut<'a>(
    pot: &'a TrapPotential,
    cfg: &'a TrapConfig,
) -> impl Fn(f64) -> f64 + 'a {
    move |q: f64| match cfg.gravity_axis {
        GravityAxis::X => potential_energy(pot, cfg, q, 0.0, 0.0),
        GravityAxis::Y => potential_energy(pot, cfg, 0.0, q, 0.0),
    }
}

fn action_with_pot(e: f64, pot: &TrapPotential, cfg: &TrapConfig) -> Result<f64, ActionError> {
    if e > pot.effective_depth * (1.0 + 1e-12) {
        return Err(ActionError::ExceedsBarrier {
            energy: e,
            barrier: pot.effective_depth,
        });
    }
    let e = e.min(pot.effective_depth);
    let q_limit = if pot.barrier_offset.is_finite() {
        pot.barrier_offset
    } else {
        // no gravity tilt: the turning point of the bare Gaussian well sits
        // at w sqrt(-ln(1 - E/U0) / 2); escape at E = U0 is unbounded
        if e >= pot.u0 * (1.0 - 1e-12) {
            return Err(ActionError::ExceedsBarrier {
                energy: e,
                barrier: pot.u0,
            });
        }
        -1.5 * cfg.waist * (-(1.0 - e / pot.u0).ln() / 2.0).sqrt()
    };
    action_half_axis(
        e,
        cfg.atom_mass,
        gravity_axis_cut(pot, cfg),
        pot.minimum_offset,
        q_limit,
    )
}

/// 1-D action S(E, U) along the gravity-tilted radial cut of a trap of peak
/// depth `depth` (J).
pub fn action_1d(e: f64, depth: f64, cfg: &TrapConfig) -> Result<f64, ActionError> {
    let (cfg_d, pot) = potential_at_depth(cfg, depth)?;
    action_with_pot(e, &pot, &cfg_d)
}

/// Solve S(e_to, u_to) = S(e_from, u_from) for e_to by bisection on the
/// monotone action.
pub fn map_energy(e_from: f64, u_from: f64, u_to: f64, cfg: &TrapConfig) -> Result<f64, ActionError> {
    let (cfg_from, pot_from) = potential_at_depth(cfg, u_from)?;
    let (cfg_to, pot_to) = potential_at_depth(cfg, u_to)?;
    let target = action_with_pot(e_from, &pot_from, &cfg_from)?;
    let hi = if pot_to.barrier_offset.is_finite() {
        pot_to.effective_depth
    } else {
        pot_to.u0 * (1.0 - 1e-9)
    };
    let s_hi = action_with_pot(hi, &pot_to, &cfg_to)?;
    if s_hi < target * (1.0 - 1e-9) {
        return Err(ActionError::NoRootBracketed { target });
    }
    let f = |e: f64| action_with_pot(e, &pot_to, &cfg_to).map_or(f64::NAN, |s| s - target);
    let root = bisect(f, 1e-12 * hi, hi, 1e-12 * hi);
    Ok(root.min(hi))
}

/// Map a shallow escape depth back to the initial energy in the deep trap:
/// the unique E_i with S(E_i, u_i) = S(U_esc, U_esc), where the right-hand
/// side is evaluated at the gravity-limited effective depth of the shallow
/// trap.
pub fn map_escape_energy(u_esc: f64, u_i: f64, cfg: &TrapConfig) -> Result<f64, ActionError> {
    let (_, pot_esc) = potential_at_depth(cfg, u_esc)?;
    map_energy(pot_esc.effective_depth, u_esc, u_i, cfg)
}

/// Monotone table of the normalized escape-depth -> initial-energy mapping.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ActionMapTable {
    /// Rows (u_ratio = U_esc/U_i, e_ratio = E_i/U_i), sorted by u_ratio,
    /// ending in (1, 1).
    pub rows: Vec<(f64, f64)>,
    /// Reference initial depth, J.
    pub u_i: f64,
}

impl ActionMapTable {
    /// Forward interpolation u_ratio -> e_ratio (piecewise linear, clamped to
    /// the tabulated range).
    pub fn forward(&self, u_ratio: f64) -> f64 {
        interp(&self.rows, u_ratio, |r| r.0, |r| r.1)
    }

    /// Inverse interpolation e_ratio -> u_ratio.
    pub fn inverse(&self, e_ratio: f64) -> f64 {
        interp(&self.rows, e_ratio, |r| r.1, |r| r.0)
    }

    pub fn validate(&self) -> Result<(), ActionError> {
        if self.rows.is_empty() {
            return Err(ActionError::InvalidRamp("empty action map".into()));
        }
        for pair in self.rows.windows(2) {
            if pair[1].0 <= pair[0].0 || pair[1].1 <= pair[0].1 {
                return Err(ActionError::InvalidRamp(
                    "action map rows must be strictly increasing".into(),
                ));
            }
        }
        let last = self.rows.last().unwrap();
        if last.0 != 1.0 || last.1 != 1.0 {
            return Err(ActionError::InvalidRamp("last action-map row must be (1, 1)".into()));
        }
        Ok(())
    }
}

fn interp<F, G>(rows: &[(f64, f64)], x: f64, key: F, val: G) -> f64
where
    F: Fn(&(f64, f64)) -> f64,
    G: Fn(&(f64, f64)) -> f64,
{
    if rows.is_empty() {
        return f64::NAN;
    }
    if x <= key(&rows[0]) {
        return val(&rows[0]);
    }
    if x >= key(rows.last().unwrap()) {
        return val(rows.last().unwrap());
    }
    let idx = rows.partition_point(|r| key(r) < x);
    let (a, b) = (&rows[idx - 1], &rows[idx]);
    let (xa, xb) = (key(a), key(b));
    let w = (x - xa) / (xb - xa);
    val(a) + w * (val(b) - val(a))
}

/// Build the action map over a grid of depth ratios in (0, 1].
pub fn build_action_map(
    u_i: f64,
    u_ratios: &[f64],
    cfg: &TrapConfig,
) -> Result<ActionMapTable, ActionError> {
    let mut ratios: Vec<f64> = u_ratios.to_vec();
    ratios.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ratios.dedup();
    if ratios.iter().any(|&r| !(r > 0.0 && r <= 1.0)) {
        return Err(ActionError::InvalidRamp("depth ratios must lie in (0, 1]".into()));
    }
    if ratios.last() != Some(&1.0) {
        ratios.push(1.0);
    }
    let rows: Result<Vec<(f64, f64)>, ActionError> = ratios
        .par_iter()
        .map(|&r| {
            if r == 1.0 {
                Ok((1.0, 1.0))
            } else {
                let e_i = map_escape_energy(r * u_i, u_i, cfg)?;
                Ok((r, e_i / u_i))
            }
        })
        .collect();
    let table = ActionMapTable { rows: rows?, u_i };
    table.validate()?;
    Ok(table)
}

/// Adiabatic scaling of the temperature with trap depth: T_i sqrt(u_f/u_i).
pub fn adiabatic_temperature(t_i: f64, u_i: f64, u_f: f64) -> f64 {
    t_i * (u_f / u_i).sqrt()
}

/// Shape of a depth ramp.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RampShape {
    LinearPower,
    Smoothstep,
    Custom,
}

/// Sampled trap-depth ramp U(t).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RampProfile {
    /// (time (s), depth (J)) samples, times strictly increasing, depths > 0.
    pub samples: Vec<(f64, f64)>,
    pub shape: RampShape,
}

impl RampProfile {
    /// Depth linear in time (linear-in-power ramp).
    pub fn linear(u_start: f64, u_end: f64, duration: f64, n: usize) -> Self {
        let samples = (0..n)
            .map(|k| {
                let s = k as f64 / (n - 1) as f64;
                (s * duration, u_start + (u_end - u_start) * s)
            })
            .collect();
        Self {
            samples,
            shape: RampShape::LinearPower,
        }
    }

    /// Smoothstep ramp: zero slope at both ends.
    pub fn smoothstep(u_start: f64, u_end: f64, duration: f64, n: usize) -> Self {
        let samples = (0..n)
            .map(|k| {
                let s = k as f64 / (n - 1) as f64;
                let w = s * s * (3.0 - 2.0 * s);
                (s * duration, u_start + (u_end - u_start) * w)
            })
            .collect();
        Self {
            samples,
            shape: RampShape::Smoothstep,
        }
    }

    pub fn validate(&self) -> Result<(), ActionError> {
        if self.samples.len() < 3 {
            return Err(ActionError::RampTooShort);
        }
        for pair in self.samples.windows(2) {
            if pair[1].0 <= pair[0].0 {
                return Err(ActionError::InvalidRamp("times must be strictly increasing".into()));
            }
        }
        if self.samples.iter().any(|&(_, u)| !(u > 0.0)) {
            return Err(ActionError::InvalidRamp("depths must be positive".into()));
        }
        Ok(())
    }
}

/// Adiabaticity margin of a ramp: max over time and both axes of
/// |d omega/dt| / omega^2, from finite differences on the samples.
/// A value well below 1 indicates an adiabatic ramp.
pub fn check_adiabaticity(ramp: &RampProfile, cfg: &TrapConfig) -> Result<(f64, f64), ActionError> {
    ramp.validate()?;
    let w = cfg.waist;
    let z_r = cfg.rayleigh_range();
    let m = cfg.atom_mass;
    // omega = c sqrt(U) per axis
    let c_perp = (4.0 / (m * w * w)).sqrt();
    let c_par = (2.0 / (m * z_r * z_r)).sqrt();

    let n = ramp.samples.len();
    let mut worst = (0.0f64, ramp.samples[0].0);
    for axis_c in [c_perp, c_par] {
        let omega: Vec<f64> = ramp.samples.iter().map(|&(_, u)| axis_c * u.sqrt()).collect();
        for k in 0..n {
            let (lo, hi) = if k == 0 {
                (0, 1)
            } else if k == n - 1 {
                (n - 2, n - 1)
            } else {
                (k - 1, k + 1)
            };
            let dw = omega[hi] - omega[lo];
            let dt = ramp.samples[hi].0 - ramp.samples[lo].0;
            let margin = (dw / dt).abs() / (omega[k] * omega[k]);
            if margin > worst.0 {
                worst = (margin, ramp.samples[k].0);
            }
        }
    }
    Ok(worst)
}

/// Escape-time criterion for a hold at depth `u_min`:
/// true iff hold * nu_par(u_min) >= 10.
pub fn hold_time_check(u_min: f64, hold: f64, cfg: &TrapConfig) -> bool {
    let z_r = cfg.rayleigh_range();
    let nu_par = (2.0 * u_min / (cfg.atom_mass * z_r * z_r)).sqrt() / (2.0 * std::f64::consts::PI);
    hold * nu_par >= 10.0
}
