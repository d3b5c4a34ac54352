//! Optical tweezer trapping potential.
//!
//! The optical part is Gaussian in the two transverse directions and
//! Lorentzian along the propagation axis. Gravity tilts the potential along
//! one transverse axis, which shifts the minimum slightly and creates a local
//! maximum (the barrier) on the downhill side. The barrier height above the
//! minimum is the gravity-limited effective depth.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constants::{KB, RB87_MASS, STANDARD_GRAVITY};
use crate::numeric::{bisect, golden_max, golden_min};

/// Transverse axis along which gravity acts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum GravityAxis {
    X,
    #[default]
    Y,
}

#[derive(Error, Debug)]
pub enum TrapError {
    #[error("no potential barrier along the gravity axis: U0 = {u0:.6e} J is at or below the threshold {threshold:.6e} J, atom untrappable")]
    NoBarrier { u0: f64, threshold: f64 },
    #[error("invalid trap configuration: {0}")]
    InvalidConfig(String),
}

/// Laser and geometry parameters of the tweezer.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct TrapConfig {
    /// Laser power, W.
    pub power: f64,
    /// Beam waist (1/e^2 intensity radius), m.
    pub waist: f64,
    /// Trap laser wavelength, m.
    pub wavelength: f64,
    /// Peak trap depth per unit laser power, J/W.
    pub depth_per_power: f64,
    /// Atomic mass, kg.
    pub atom_mass: f64,
    /// Gravitational acceleration, m/s^2.
    pub gravity: f64,
    /// Transverse axis tilted by gravity.
    pub gravity_axis: GravityAxis,
}

impl TrapConfig {
    /// 87Rb in the 850 nm tweezer: w = 1.03 um, U0/kB = 2.8 mK at 10 mW.
    pub fn rb87() -> Self {
        Self {
            power: 10e-3,
            waist: 1.03e-6,
            wavelength: 850e-9,
            depth_per_power: 2.8e-3 * KB / 10e-3,
            atom_mass: RB87_MASS,
            gravity: STANDARD_GRAVITY,
            gravity_axis: GravityAxis::Y,
        }
    }

    pub fn with_power(self, power: f64) -> Self {
        Self { power, ..self }
    }

    /// Same geometry without the gravity tilt.
    pub fn without_gravity(self) -> Self {
        Self {
            gravity: 0.0,
            ..self
        }
    }

    pub fn validate(&self) -> Result<(), TrapError> {
        let bad = |msg: &str| Err(TrapError::InvalidConfig(msg.to_string()));
        if !(self.power >= 0.0) {
            return bad("power must be >= 0");
        }
        if !(self.waist > 0.0) {
            return bad("waist must be > 0");
        }
        if !(self.wavelength > 0.0) {
            return bad("wavelength must be > 0");
        }
        if !(self.depth_per_power > 0.0) {
            return bad("depth_per_power must be > 0");
        }
        if !(self.atom_mass > 0.0) {
            return bad("atom_mass must be > 0");
        }
        if !(self.gravity >= 0.0) {
            return bad("gravity must be >= 0");
        }
        Ok(())
    }

    /// Rayleigh range z_R = pi w^2 / lambda.
    pub fn rayleigh_range(&self) -> f64 {
        PI * self.waist * self.waist / self.wavelength
    }

    /// Depth below which the gravity tilt removes the barrier entirely:
    /// U0 = m g w e^{1/2} / 2 (peak optical gradient equals m g).
    pub fn no_barrier_threshold(&self) -> f64 {
        0.5 * self.atom_mass * self.gravity * self.waist * 0.5f64.exp()
    }
}

/// Derived quantities of the trapping potential at a given power.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct TrapPotential {
    /// Peak optical depth U0, J.
    pub u0: f64,
    /// Rayleigh range, m.
    pub z_r: f64,
    /// Radial angular frequency, rad/s.
    pub omega_perp: f64,
    /// Axial angular frequency, rad/s.
    pub omega_par: f64,
    /// Gravity-limited barrier height above the minimum, J.
    pub effective_depth: f64,
    /// Raw potential value at the gravity-shifted minimum, J. Energies are
    /// measured relative to this zero.
    pub energy_zero: f64,
    /// Gravity-axis coordinate of the shifted minimum, m.
    pub minimum_offset: f64,
    /// Gravity-axis coordinate of the barrier maximum, m (infinite when
    /// gravity is switched off).
    pub barrier_offset: f64,
}

impl TrapPotential {
    /// Radial trap frequency, Hz.
    pub fn nu_perp(&self) -> f64 {
        self.omega_perp / (2.0 * PI)
    }

    /// Axial trap frequency, Hz.
    pub fn nu_par(&self) -> f64 {
        self.omega_par / (2.0 * PI)
    }

    /// Rebuild at a different laser power. U0 scales linearly, frequencies as
    /// sqrt(P); the effective depth is recomputed, not scaled.
    pub fn scale_power(&self, cfg: &TrapConfig, new_power: f64) -> Result<TrapPotential, TrapError> {
        build_potential(&cfg.with_power(new_power))
    }
}

/// 1-D optical + gravity profile along the downhill gravity direction,
/// parameterized by s = |q| >= 0.
fn downhill_profile(u0: f64, waist: f64, mg: f64) -> impl Fn(f64) -> f64 {
    let w2 = waist * waist;
    move |s: f64| -u0 * (-2.0 * s * s / w2).exp() - mg * s
}

/// Derivative of [`downhill_profile`] with respect to s.
fn downhill_gradient(u0: f64, waist: f64, mg: f64) -> impl Fn(f64) -> f64 {
    let w2 = waist * waist;
    move |s: f64| u0 * (4.0 * s / w2) * (-2.0 * s * s / w2).exp() - mg
}

pub fn build_potential(cfg: &TrapConfig) -> Result<TrapPotential, TrapError> {
    cfg.validate()?;
    let u0 = cfg.depth_per_power * cfg.power;
    let w = cfg.waist;
    let mg = cfg.atom_mass * cfg.gravity;
    let z_r = cfg.rayleigh_range();
    let omega_perp = (4.0 * u0 / (cfg.atom_mass * w * w)).sqrt();
    let omega_par = (2.0 * u0 / (cfg.atom_mass * z_r * z_r)).sqrt();

    if mg == 0.0 {
        if u0 <= 0.0 {
            return Err(TrapError::NoBarrier { u0, threshold: 0.0 });
        }
        // no tilt: escape over the full optical depth at infinity
        return Ok(TrapPotential {
            u0,
            z_r,
            omega_perp,
            omega_par,
            effective_depth: u0,
            energy_zero: -u0,
            minimum_offset: 0.0,
            barrier_offset: f64::INFINITY,
        });
    }

    let threshold = cfg.no_barrier_threshold();
    if u0 <= threshold {
        return Err(TrapError::NoBarrier { u0, threshold });
    }

    let profile = downhill_profile(u0, w, mg);
    let tol = 1e-10 * w;

    // Bracket the barrier maximum on a geometric grid of s in [w/10, 20 w],
    // then refine by golden section. Near the no-barrier threshold the bump
    // can be narrower than the grid; fall back to bisection on the gradient.
    let n = 160usize;
    let grid: Vec<f64> = (0..n)
        .map(|k| 0.1 * w * 200f64.powf(k as f64 / (n - 1) as f64))
        .collect();
    let vals: Vec<f64> = grid.iter().map(|&s| profile(s)).collect();
    let mut bracket = None;
    for k in 1..n - 1 {
        if vals[k] >= vals[k - 1] && vals[k] >= vals[k + 1] {
            bracket = Some((grid[k - 1], grid[k + 1]));
            break;
        }
    }
    let s_barrier = match bracket {
        Some((lo, hi)) => golden_max(&profile, lo, hi, tol).0,
        None => {
            let grad = downhill_gradient(u0, w, mg);
            bisect(&grad, 0.5 * w, 20.0 * w, tol)
        }
    };
    let barrier_value = profile(s_barrier);

    let (s_min, energy_zero) = golden_min(&profile, 0.0, s_barrier, tol);
    let effective_depth = barrier_value - energy_zero;
    if !(effective_depth > 0.0) {
        return Err(TrapError::NoBarrier { u0, threshold });
    }

    Ok(TrapPotential {
        u0,
        z_r,
        omega_perp,
        omega_par,
        effective_depth,
        energy_zero,
        minimum_offset: -s_min,
        barrier_offset: -s_barrier,
    })
}

/// Potential energy at (x, y, z), measured from the gravity-shifted minimum.
pub fn potential_energy(pot: &TrapPotential, cfg: &TrapConfig, x: f64, y: f64, z: f64) -> f64 {
    let w2 = cfg.waist * cfg.waist;
    let r2 = x * x + y * y;
    let axial = 1.0 + (z / pot.z_r) * (z / pot.z_r);
    let optical = -pot.u0 * (-2.0 * r2 / w2).exp() / axial;
    let q = match cfg.gravity_axis {
        GravityAxis::X => x,
        GravityAxis::Y => y,
    };
    optical + cfg.atom_mass * cfg.gravity * q - pot.energy_zero
}

/// Position of the barrier maximum along the gravity axis and the effective
/// depth U(barrier) - U(minimum).
pub fn locate_barrier(pot: &TrapPotential, cfg: &TrapConfig) -> Result<(f64, f64), TrapError> {
    if cfg.gravity == 0.0 {
        return Err(TrapError::InvalidConfig(
            "no gravity tilt: the potential has no local maximum along the gravity axis".to_string(),
        ));
    }
    Ok((pot.barrier_offset, pot.effective_depth))
}

/// Build the potential for a target peak depth (J) instead of a power.
pub fn potential_at_depth(cfg: &TrapConfig, u0: f64) -> Result<(TrapConfig, TrapPotential), TrapError> {
    let cfg2 = cfg.with_power(u0 / cfg.depth_per_power);
    let pot = build_potential(&cfg2)?;
    Ok((cfg2, pot))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn paper_frequencies_and_rayleigh_range() {
        let cfg = TrapConfig::rb87();
        let pot = build_potential(&cfg).unwrap();
        // nu_perp ~ 160 kHz, nu_par ~ 30 kHz at 10 mW
        assert_relative_eq!(pot.nu_perp(), 160e3, max_relative = 0.05);
        assert_relative_eq!(pot.nu_par(), 30e3, max_relative = 0.10);
        // z_R = pi w^2 / lambda = 3.92 um
        assert_relative_eq!(pot.z_r, 3.92e-6, max_relative = 1e-3);
    }

    #[test]
    fn zero_power_is_untrappable() {
        let cfg = TrapConfig::rb87().with_power(0.0);
        assert!(matches!(
            build_potential(&cfg),
            Err(TrapError::NoBarrier { .. })
        ));
    }

    #[test]
    fn potential_zero_at_minimum_and_full_depth_at_origin_without_gravity() {
        let cfg = TrapConfig::rb87().without_gravity();
        let pot = build_potential(&cfg).unwrap();
        assert_eq!(potential_energy(&pot, &cfg, 0.0, 0.0, 0.0), 0.0);
        // raw optical term equals -U0 at the focus
        assert_relative_eq!(pot.energy_zero, -pot.u0);
    }

    #[test]
    fn gravity_dominates_far_from_focus() {
        let cfg = TrapConfig::rb87();
        let pot = build_potential(&cfg).unwrap();
        let mg = cfg.atom_mass * cfg.gravity;
        let y1 = 1.0e-3;
        let y2 = 2.0e-3;
        let e1 = potential_energy(&pot, &cfg, 0.0, y1, 0.0);
        let e2 = potential_energy(&pot, &cfg, 0.0, y2, 0.0);
        assert_relative_eq!((e2 - e1) / (y2 - y1), mg, max_relative = 1e-9);
    }

    #[test]
    fn deep_trap_barrier_close_to_u0() {
        let cfg = TrapConfig::rb87();
        let pot = build_potential(&cfg).unwrap();
        // gravity scale m g w / kB ~ 0.1 uK << U0/kB = 2.8 mK
        assert!((pot.u0 - pot.effective_depth) / pot.u0 < 0.005);
        assert!(pot.effective_depth / pot.u0 >= 0.995);
        assert!(pot.effective_depth <= pot.u0);
    }

    #[test]
    fn shallow_trap_barrier_visibly_below_u0() {
        let cfg = TrapConfig::rb87();
        let (_, pot) = potential_at_depth(&cfg, 4e-6 * KB).unwrap();
        assert!(pot.effective_depth < 0.99 * pot.u0);
        assert!(pot.effective_depth > 0.0);
    }

    #[test]
    fn below_threshold_depth_errors() {
        let cfg = TrapConfig::rb87();
        let threshold = cfg.no_barrier_threshold();
        assert!(matches!(
            potential_at_depth(&cfg, 0.9 * threshold),
            Err(TrapError::NoBarrier { .. })
        ));
        // just above the threshold a barrier must exist
        let (_, pot) = potential_at_depth(&cfg, 1.05 * threshold).unwrap();
        assert!(pot.effective_depth > 0.0);
    }

    #[test]
    fn second_derivatives_match_harmonic_frequencies() {
        let cfg = TrapConfig::rb87().without_gravity();
        let pot = build_potential(&cfg).unwrap();
        let h = 1e-9;
        let d2 = |f: &dyn Fn(f64) -> f64| (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h);
        let kx = d2(&|x| potential_energy(&pot, &cfg, x, 0.0, 0.0));
        let kz = d2(&|z| potential_energy(&pot, &cfg, 0.0, 0.0, z));
        assert_relative_eq!(kx, cfg.atom_mass * pot.omega_perp.powi(2), max_relative = 1e-3);
        assert_relative_eq!(kz, cfg.atom_mass * pot.omega_par.powi(2), max_relative = 1e-3);
    }

    #[test]
    fn effective_depth_monotone_in_power() {
        let cfg = TrapConfig::rb87();
        let powers: Vec<f64> = (1..=20).map(|k| k as f64 * 1e-3).collect();
        let depths: Vec<f64> = powers
            .iter()
            .map(|&p| build_potential(&cfg.with_power(p)).unwrap().effective_depth)
            .collect();
        for pair in depths.windows(2) {
            assert!(pair[1] > pair[0]);
        }
    }

    #[test]
    fn deep_traps_have_negligible_gravity_correction() {
        let cfg = TrapConfig::rb87();
        for u_mk in [1.0, 2.0, 4.0, 8.0] {
            let (_, pot) = potential_at_depth(&cfg, u_mk * 1e-3 * KB).unwrap();
            assert!((pot.effective_depth - pot.u0).abs() / pot.u0 < 0.01);
        }
    }

    #[test]
    fn scale_power_examples() {
        let cfg = TrapConfig::rb87();
        let pot = build_potential(&cfg).unwrap();
        let quarter = pot.scale_power(&cfg, 2.5e-3).unwrap();
        assert_relative_eq!(quarter.nu_perp(), 0.5 * pot.nu_perp(), max_relative = 1e-12);
        // oracle: numeric second derivative at the minimum of the scaled trap
        let cfg_q = cfg.with_power(2.5e-3).without_gravity();
        let pot_q = build_potential(&cfg_q).unwrap();
        let h = 1e-9;
        let k = (potential_energy(&pot_q, &cfg_q, h, 0.0, 0.0)
            - 2.0 * potential_energy(&pot_q, &cfg_q, 0.0, 0.0, 0.0)
            + potential_energy(&pot_q, &cfg_q, -h, 0.0, 0.0))
            / (h * h);
        assert_relative_eq!(
            (k / cfg.atom_mass).sqrt(),
            quarter.omega_perp,
            max_relative = 1e-3
        );

        let same = pot.scale_power(&cfg, cfg.power).unwrap();
        assert_eq!(same.u0, pot.u0);
        assert_eq!(same.omega_perp, pot.omega_perp);
        assert_eq!(same.effective_depth, pot.effective_depth);

        let four = pot.scale_power(&cfg, 4.0 * cfg.power).unwrap();
        assert_relative_eq!(four.u0, 4.0 * pot.u0, max_relative = 1e-14);
    }

    #[test]
    fn locate_barrier_reports_downhill_maximum() {
        let cfg = TrapConfig::rb87();
        let pot = build_potential(&cfg).unwrap();
        let (qb, eff) = locate_barrier(&pot, &cfg).unwrap();
        assert!(qb < 0.0);
        assert!(eff > 0.0 && eff <= pot.u0);
        // the barrier really is a local maximum of the 1-D cut
        let h = 1e-10;
        let f = |q: f64| potential_energy(&pot, &cfg, 0.0, q, 0.0);
        assert!(f(qb) >= f(qb - h));
        assert!(f(qb) >= f(qb + h));
        assert!(matches!(
            locate_barrier(&pot, &cfg.without_gravity()),
            Err(TrapError::InvalidConfig(_))
        ));
    }

    proptest! {
        #[test]
        fn transverse_mirror_symmetry(x in -3e-6..3e-6f64, y in -3e-6..3e-6f64, z in -10e-6..10e-6f64) {
            let cfg = TrapConfig::rb87();
            let pot = build_potential(&cfg).unwrap();
            // gravity acts along y; the x -> -x reflection is exact
            let a = potential_energy(&pot, &cfg, x, y, z);
            let b = potential_energy(&pot, &cfg, -x, y, z);
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(pot.u0));
        }
    }
}
