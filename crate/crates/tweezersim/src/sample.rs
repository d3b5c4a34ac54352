//! Single-atom phase-space sampling.
//!
//! Two sources: a thermal Maxwell-Boltzmann distribution in the harmonic
//! approximation of the trap, and a discretized truncated Boltzmann
//! distribution where a total energy is drawn from binned E^2 exp(-E/kBT)
//! weights, split uniformly over the three axes and converted to a
//! position/velocity pair through a random oscillation phase.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::constants::KB;
use crate::rng::RngSeed;
use crate::trap::{GravityAxis, TrapConfig, TrapPotential};

/// One atom's position-velocity 6-vector (SI units).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseSpaceState {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub vx: f64,
    pub vy: f64,
    pub vz: f64,
}

impl PhaseSpaceState {
    pub fn speed_squared(&self) -> f64 {
        self.vx * self.vx + self.vy * self.vy + self.vz * self.vz
    }
}

/// Thermal Maxwell-Boltzmann source.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ThermalSpec {
    /// Temperature, K.
    pub temperature: f64,
}

/// Discretized truncated Boltzmann source.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct TruncatedSpec {
    /// Temperature, K.
    pub temperature: f64,
    /// Truncation energy, J.
    pub truncation_energy: f64,
    /// Number of energy bins.
    pub n_bins: u32,
}

impl TruncatedSpec {
    /// Bin center energies E_j = (j - 1/2) dU, j = 1..N.
    pub fn bin_energies(&self) -> Vec<f64> {
        let du = self.truncation_energy / self.n_bins as f64;
        (0..self.n_bins).map(|j| (j as f64 + 0.5) * du).collect()
    }

    /// Unnormalized bin weights E_j^2 exp(-E_j / kB T).
    pub fn bin_weights(&self) -> Vec<f64> {
        let kt = KB * self.temperature;
        self.bin_energies()
            .iter()
            .map(|&e| e * e * (-e / kt).exp())
            .collect()
    }
}

/// Per-axis harmonic frequencies in (x, y, z) order.
fn axis_frequencies(pot: &TrapPotential) -> [f64; 3] {
    [pot.omega_perp, pot.omega_perp, pot.omega_par]
}

/// Shift the gravity-axis coordinate to the tilted minimum.
fn apply_minimum_offset(state: &mut PhaseSpaceState, pot: &TrapPotential, cfg: &TrapConfig) {
    match cfg.gravity_axis {
        GravityAxis::X => state.x += pot.minimum_offset,
        GravityAxis::Y => state.y += pot.minimum_offset,
    }
}

/// Total harmonic energy of a state relative to the trap minimum:
/// kinetic plus 1/2 m (w_perp^2 r_perp^2 + w_par^2 z^2).
pub fn harmonic_energy(state: &PhaseSpaceState, pot: &TrapPotential, cfg: &TrapConfig) -> f64 {
    let (x0, y0) = match cfg.gravity_axis {
        GravityAxis::X => (pot.minimum_offset, 0.0),
        GravityAxis::Y => (0.0, pot.minimum_offset),
    };
    let m = cfg.atom_mass;
    let kin = 0.5 * m * state.speed_squared();
    let dx = state.x - x0;
    let dy = state.y - y0;
    kin + 0.5
        * m
        * (pot.omega_perp.powi(2) * (dx * dx + dy * dy) + pot.omega_par.powi(2) * state.z * state.z)
}

/// Draw a state from the thermal distribution in the harmonic approximation.
///
/// Positions are Gaussian with sigma = sqrt(kB T / (m w^2)) per axis,
/// velocities Gaussian with sigma = sqrt(kB T / m).
pub fn sample_thermal(
    spec: &ThermalSpec,
    pot: &TrapPotential,
    cfg: &TrapConfig,
    seed: RngSeed,
) -> PhaseSpaceState {
    let mut rng = seed.rng();
    let kt = KB * spec.temperature;
    let m = cfg.atom_mass;
    let sv = (kt / m).sqrt();
    let [wx, wy, wz] = axis_frequencies(pot);
    let mut draw = |sigma: f64| -> f64 {
        let n: f64 = StandardNormal.sample(&mut rng);
        sigma * n
    };
    let mut state = PhaseSpaceState {
        x: draw((kt / (m * wx * wx)).sqrt()),
        y: draw((kt / (m * wy * wy)).sqrt()),
        z: draw((kt / (m * wz * wz)).sqrt()),
        vx: draw(sv),
        vy: draw(sv),
        vz: draw(sv),
    };
    apply_minimum_offset(&mut state, pot, cfg);
    state
}

/// Draw a state from the discretized truncated Boltzmann distribution.
pub fn sample_truncated(
    spec: &TruncatedSpec,
    pot: &TrapPotential,
    cfg: &TrapConfig,
    seed: RngSeed,
) -> PhaseSpaceState {
    let mut rng = seed.rng();
    let energies = spec.bin_energies();
    let weights = spec.bin_weights();
    let total: f64 = weights.iter().sum();
    let mut u = rng.gen::<f64>() * total;
    let mut e_total = *energies.last().expect("n_bins >= 1");
    for (e, w) in energies.iter().zip(weights.iter()) {
        if u < *w {
            e_total = *e;
            break;
        }
        u -= w;
    }

    let (e1, e2, e3) = simplex_split_with(e_total, &mut rng);
    let m = cfg.atom_mass;
    let [wx, wy, wz] = axis_frequencies(pot);
    let mut axis = |e_axis: f64, omega: f64| -> (f64, f64) {
        let phase = rng.gen::<f64>() * std::f64::consts::TAU;
        let q = (2.0 * e_axis / (m * omega * omega)).sqrt() * phase.cos();
        let v = (2.0 * e_axis / m).sqrt() * phase.sin();
        (q, v)
    };
    let (x, vx) = axis(e1, wx);
    let (y, vy) = axis(e2, wy);
    let (z, vz) = axis(e3, wz);
    let mut state = PhaseSpaceState { x, y, z, vx, vy, vz };
    apply_minimum_offset(&mut state, pot, cfg);
    state
}

/// Split a total energy uniformly over the 2-simplex E1 + E2 + E3 = total.
pub fn simplex_split(total_energy: f64, seed: RngSeed) -> (f64, f64, f64) {
    simplex_split_with(total_energy, &mut seed.rng())
}

fn simplex_split_with(total: f64, rng: &mut ChaCha8Rng) -> (f64, f64, f64) {
    let a = rng.gen::<f64>();
    let b = rng.gen::<f64>();
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let e1 = total * lo;
    let e2 = total * (hi - lo);
    // close the sum exactly
    let e3 = (total - e1 - e2).max(0.0);
    (e1, e2, e3)
}
