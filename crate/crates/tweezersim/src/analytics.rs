//! Closed-form Boltzmann statistics for the 3-D harmonic trap and the
//! motional figures of merit (mean vibrational number, Lamb-Dicke and
//! thermal-localization parameters).

use serde::{Deserialize, Serialize};

use crate::constants::{H, KB};
use crate::trap::{TrapConfig, TrapPotential};

/// Regularized lower incomplete gamma function P(s, x) = gamma(s, x)/Gamma(s)
/// for integer s, by power series. Stable for small x where the closed form
/// 1 - e^{-x} * poly(x) cancels catastrophically.
fn gamma_p_series(s: u32, x: f64) -> f64 {
    // gamma(s,x) = x^s e^{-x} sum_k x^k / (s (s+1) ... (s+k))
    let mut term = 1.0 / s as f64;
    let mut sum = term;
    let mut k = 1u32;
    loop {
        term *= x / (s + k) as f64;
        sum += term;
        if term < sum * 1e-17 || k > 500 {
            break;
        }
        k += 1;
    }
    let mut gamma_s = 1.0;
    for j in 1..s {
        gamma_s *= j as f64;
    }
    x.powi(s as i32) * (-x).exp() * sum / gamma_s
}

/// P(3, eta) = 1 - (1 + eta + eta^2/2) e^{-eta}.
fn p3(eta: f64) -> f64 {
    if eta < 1.0 {
        gamma_p_series(3, eta)
    } else {
        1.0 - (1.0 + eta + 0.5 * eta * eta) * (-eta).exp()
    }
}

/// P(4, eta) = 1 - (1 + eta + eta^2/2 + eta^3/6) e^{-eta}.
fn p4(eta: f64) -> f64 {
    if eta < 1.0 {
        gamma_p_series(4, eta)
    } else {
        let poly = 1.0 + eta + 0.5 * eta * eta + eta * eta * eta / 6.0;
        1.0 - poly * (-eta).exp()
    }
}

/// Thermal energy density for the 3-D harmonic trap:
/// f(E) = E^2 e^{-E/kBT} / (2 (kBT)^3). The E^2 factor is the three
/// dimensional density of states.
pub fn f_th(e: f64, t: f64) -> f64 {
    let kt = KB * t;
    e * e * (-e / kt).exp() / (2.0 * kt * kt * kt)
}

/// Probability that a thermal atom has energy below E; equivalently the
/// survival probability after truncating the distribution at E.
pub fn p_surv(e: f64, t: f64) -> f64 {
    p_surv_eta(e / (KB * t))
}

/// Same, as a function of eta = E / kB T.
pub fn p_surv_eta(eta: f64) -> f64 {
    p3(eta)
}

/// Mean energy of the Boltzmann distribution truncated at `u_trunc`:
/// 3 kB T * P(4, eta) / P(3, eta) with eta = u_trunc / kB T.
///
/// Limits: 3 kB T for eta >> 1, (3/4) u_trunc for eta -> 0.
pub fn mean_energy_truncated(t: f64, u_trunc: f64) -> f64 {
    let kt = KB * t;
    let eta = u_trunc / kt;
    if eta <= 0.0 {
        return 0.0;
    }
    if eta < 1e-8 {
        // leading order of the moment ratio
        return 0.75 * u_trunc;
    }
    3.0 * kt * p4(eta) / p3(eta)
}

/// Motional figures of merit.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct MotionFigures {
    /// Mean radial vibrational number <E> / (3 h nu_perp).
    pub n_perp: f64,
    /// Lamb-Dicke parameter sqrt(E_r / (h nu_mean)).
    pub eta_ld: f64,
    /// Thermal localization parameter eta_LD sqrt(kB T / (h nu_mean)).
    pub eta_th: f64,
    /// Geometric-mean trap frequency (nu_perp^2 nu_par)^(1/3), Hz.
    pub mean_freq: f64,
}

/// Evaluate the figures of merit for a given mean energy and temperature.
///
/// `recoil_wavelength` is the fluorescence wavelength setting the recoil
/// energy E_r = h^2 / (2 m lambda^2), not the trapping wavelength.
pub fn motion_figures(
    mean_energy: f64,
    t: f64,
    pot: &TrapPotential,
    cfg: &TrapConfig,
    recoil_wavelength: f64,
) -> MotionFigures {
    let nu_perp = pot.nu_perp();
    let mean_freq = (nu_perp * nu_perp * pot.nu_par()).cbrt();
    let recoil = H * H / (2.0 * cfg.atom_mass * recoil_wavelength * recoil_wavelength);
    let eta_ld = (recoil / (H * mean_freq)).sqrt();
    MotionFigures {
        n_perp: mean_energy / (3.0 * H * nu_perp),
        eta_ld,
        eta_th: eta_ld * (KB * t / (H * mean_freq)).sqrt(),
        mean_freq,
    }
}

/// Depth scaling of the thermal localization parameter under adiabatic
/// changes: eta_th proportional to U^(-1/4).
pub fn eta_th_depth_scaling(eta_th_ref: f64, u_ref: f64, u_new: f64) -> f64 {
    eta_th_ref * (u_new / u_ref).powf(-0.25)
}
