//! Temperature fitting by chi-square minimization against the Monte-Carlo
//! recapture model, with parabolic uncertainty extraction around the grid
//! minimum.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::flight::{simulate_rr, EnergySource, RRCurve, SimPlan};
use crate::rng::RngSeed;
use crate::sample::{ThermalSpec, TruncatedSpec};
use crate::trap::{TrapConfig, TrapPotential};

#[derive(Error, Debug)]
pub enum FitError {
    #[error("data and model release-time grids differ")]
    MismatchedGrids,
    #[error("data point at dt = {0} s has zero uncertainty")]
    ZeroSigma(f64),
    #[error("temperature grid needs at least 5 sorted points, got {0}")]
    GridTooSmall(usize),
    #[error("chi-square minimum sits at the grid edge (T = {0} K): grid does not bracket the best fit")]
    GridDoesNotBracket(f64),
    #[error("chi-square is not convex around its minimum (curvature {0:.3e}): noisy model, increase n_traj")]
    NoisyModel(f64),
    #[error("parabola fit needs at least 3 distinct abscissas")]
    DegenerateParabola,
    #[error(transparent)]
    Flight(#[from] crate::flight::FlightError),
}

/// chi^2 = sum_i (f_i - P_i)^2 / sigma_i^2 with model values f_i and data
/// values P_i.
pub fn chi_square(data: &RRCurve, model: &RRCurve) -> Result<f64, FitError> {
    if data.points.len() != model.points.len() {
        return Err(FitError::MismatchedGrids);
    }
    let mut sum = 0.0;
    for (d, m) in data.points.iter().zip(model.points.iter()) {
        if d.dt != m.dt {
            return Err(FitError::MismatchedGrids);
        }
        if d.sigma <= 0.0 {
            return Err(FitError::ZeroSigma(d.dt));
        }
        let r = (m.p - d.p) / d.sigma;
        sum += r * r;
    }
    Ok(sum)
}

/// Least-squares quadratic fit to (T, chi^2) samples.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ParabolaFit {
    /// Abscissa of the minimum.
    pub vertex: f64,
    /// Second derivative d^2 chi^2 / dT^2 at the vertex.
    pub curvature: f64,
    /// Statistical uncertainty of the vertex from the fit covariance.
    pub vertex_sigma: f64,
}

fn solve3(a: [[f64; 3]; 3], b: [f64; 3]) -> Option<([f64; 3], [[f64; 3]; 3])> {
    // inverse of a symmetric 3x3 by cofactors; returns (solution, inverse)
    let det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    let mut inv = [[0.0; 3]; 3];
    inv[0][0] = (a[1][1] * a[2][2] - a[1][2] * a[2][1]) / det;
    inv[0][1] = (a[0][2] * a[2][1] - a[0][1] * a[2][2]) / det;
    inv[0][2] = (a[0][1] * a[1][2] - a[0][2] * a[1][1]) / det;
    inv[1][0] = (a[1][2] * a[2][0] - a[1][0] * a[2][2]) / det;
    inv[1][1] = (a[0][0] * a[2][2] - a[0][2] * a[2][0]) / det;
    inv[1][2] = (a[0][2] * a[1][0] - a[0][0] * a[1][2]) / det;
    inv[2][0] = (a[1][0] * a[2][1] - a[1][1] * a[2][0]) / det;
    inv[2][1] = (a[0][1] * a[2][0] - a[0][0] * a[2][1]) / det;
    inv[2][2] = (a[0][0] * a[1][1] - a[0][1] * a[1][0]) / det;
    let mut x = [0.0; 3];
    for i in 0..3 {
        x[i] = inv[i][0] * b[0] + inv[i][1] * b[1] + inv[i][2] * b[2];
    }
    Some((x, inv))
}

/// Fit y = a + b u + c u^2 in the centered and scaled coordinate
/// u = (T - mean) / spread, then report the vertex in the original
/// coordinate, the curvature and the vertex uncertainty propagated from the
/// residual-based fit covariance.
pub fn parabola_vertex(points: &[(f64, f64)]) -> Result<ParabolaFit, FitError> {
    if points.len() < 3 {
        return Err(FitError::DegenerateParabola);
    }
    let n = points.len() as f64;
    let mean = points.iter().map(|p| p.0).sum::<f64>() / n;
    let spread = points
        .iter()
        .map(|p| (p.0 - mean).abs())
        .fold(0.0f64, f64::max);
    if spread == 0.0 {
        return Err(FitError::DegenerateParabola);
    }
    let mut s = [0.0f64; 5];
    let mut t = [0.0f64; 3];
    for &(x, y) in points {
        let u = (x - mean) / spread;
        let mut p = 1.0;
        for k in 0..5 {
            s[k] += p;
            if k < 3 {
                t[k] += y * p;
            }
            p *= u;
        }
    }
    let a = [[s[0], s[1], s[2]], [s[1], s[2], s[3]], [s[2], s[3], s[4]]];
    let (coef, inv) = solve3(a, t).ok_or(FitError::DegenerateParabola)?;
    let [c0, c1, c2] = coef;
    let curvature = 2.0 * c2 / (spread * spread);
    if !(curvature > 0.0) {
        return Err(FitError::NoisyModel(curvature));
    }
    let u_vertex = -c1 / (2.0 * c2);
    let vertex = mean + spread * u_vertex;

    // residual variance with 3 fitted parameters
    let dof = points.len() as f64 - 3.0;
    let vertex_sigma = if dof > 0.0 {
        let ssr: f64 = points
            .iter()
            .map(|&(x, y)| {
                let u = (x - mean) / spread;
                let r = y - (c0 + c1 * u + c2 * u * u);
                r * r
            })
            .sum();
        let var_scale = ssr / dof;
        // vertex = -c1/(2 c2): gradient (0, -1/(2 c2), c1/(2 c2^2)) in u units
        let g1 = -1.0 / (2.0 * c2);
        let g2 = c1 / (2.0 * c2 * c2);
        let var_u = var_scale
            * (g1 * g1 * inv[1][1] + g2 * g2 * inv[2][2] + 2.0 * g1 * g2 * inv[1][2]);
        spread * var_u.max(0.0).sqrt()
    } else {
        0.0
    };
    Ok(ParabolaFit {
        vertex,
        curvature,
        vertex_sigma,
    })
}

/// Which initial-energy model the fit simulates.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub enum FitModel {
    /// Full Maxwell-Boltzmann ensemble at the candidate temperature.
    Thermal,
    /// Boltzmann ensemble truncated at a fixed energy (J); the candidate
    /// temperature sets the underlying distribution.
    Truncated { truncation_energy: f64, n_bins: u32 },
}

impl FitModel {
    fn source(&self, t: f64) -> EnergySource {
        match *self {
            FitModel::Thermal => EnergySource::Thermal(ThermalSpec { temperature: t }),
            FitModel::Truncated {
                truncation_energy,
                n_bins,
            } => EnergySource::Truncated(TruncatedSpec {
                temperature: t,
                truncation_energy,
                n_bins,
            }),
        }
    }
}

/// Knobs of [`fit_temperature`].
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct FitOptions {
    /// Model trajectories per candidate temperature.
    pub n_trajectories: u64,
    /// Plateau factor multiplying the model.
    pub scale: f64,
    pub model: FitModel,
    /// Fit the plateau factor per candidate temperature instead of fixing it.
    pub fit_plateau: bool,
    /// Accept a chi-square minimum on the upper grid edge instead of failing,
    /// reporting the edge temperature with an uncertainty spanning the whole
    /// grid. Strongly truncated ensembles approach a temperature-independent
    /// shape, so their chi-square can flatten out without an interior minimum.
    pub clamp_upper_edge: bool,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            n_trajectories: 10_000,
            scale: 0.95,
            model: FitModel::Thermal,
            fit_plateau: false,
            clamp_upper_edge: false,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FitResult {
    /// Best-fit temperature, K.
    pub t_best: f64,
    /// Combined one-sigma uncertainty, K.
    pub sigma_t: f64,
    pub chi2_min: f64,
    /// Plateau factor applied to the best model curve.
    pub scale_used: f64,
    pub t_grid: Vec<f64>,
    pub chi2_values: Vec<f64>,
}

/// Fit a temperature to a recapture curve.
///
/// Each candidate temperature is simulated with the same seed (common random
/// numbers), which keeps chi^2(T) smooth; a parabola through the 5 grid
/// points around the minimum gives the vertex and sigma_T = sqrt(2 /
/// curvature), combined in quadrature with the parabola-fit uncertainty.
pub fn fit_temperature(
    data: &RRCurve,
    pot: &TrapPotential,
    cfg: &TrapConfig,
    t_grid: &[f64],
    opts: &FitOptions,
    seed: RngSeed,
) -> Result<FitResult, FitError> {
    if t_grid.len() < 5 || t_grid.windows(2).any(|p| p[1] <= p[0]) {
        return Err(FitError::GridTooSmall(t_grid.len()));
    }
    let mut sorted = data.clone();
    sorted
        .points
        .sort_by(|a, b| a.dt.partial_cmp(&b.dt).unwrap());
    let dt_grid = sorted.dt_values();

    let mut chi2_values = Vec::with_capacity(t_grid.len());
    let mut scales = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let plan = SimPlan {
            n_trajectories: opts.n_trajectories,
            dt_grid: dt_grid.clone(),
            source: opts.model.source(t),
            scale: if opts.fit_plateau { 1.0 } else { opts.scale },
        };
        let mut model = simulate_rr(&plan, pot, cfg, seed)?;
        let s = if opts.fit_plateau {
            let mut num = 0.0;
            let mut den = 0.0;
            for (d, m) in sorted.points.iter().zip(model.points.iter()) {
                if d.sigma <= 0.0 {
                    return Err(FitError::ZeroSigma(d.dt));
                }
                num += m.p * d.p / (d.sigma * d.sigma);
                den += m.p * m.p / (d.sigma * d.sigma);
            }
            let s = if den > 0.0 { (num / den).clamp(0.0, 1.0) } else { 1.0 };
            for m in &mut model.points {
                m.p *= s;
                m.sigma *= s;
            }
            s
        } else {
            opts.scale
        };
        scales.push(s);
        chi2_values.push(chi_square(&sorted, &model)?);
    }

    let argmin = chi2_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .unwrap()
        .0;
    if argmin == t_grid.len() - 1 && opts.clamp_upper_edge {
        return Ok(FitResult {
            t_best: t_grid[argmin],
            sigma_t: t_grid[argmin] - t_grid[0],
            chi2_min: chi2_values[argmin],
            scale_used: scales[argmin],
            t_grid: t_grid.to_vec(),
            chi2_values,
        });
    }
    if argmin == 0 || argmin == t_grid.len() - 1 {
        return Err(FitError::GridDoesNotBracket(t_grid[argmin]));
    }
    let start = argmin.saturating_sub(2).min(t_grid.len() - 5);
    let window: Vec<(f64, f64)> = (start..start + 5)
        .map(|k| (t_grid[k], chi2_values[k]))
        .collect();
    let fit = parabola_vertex(&window)?;
    let sigma_curv = (2.0 / fit.curvature).sqrt();
    let sigma_t = (sigma_curv * sigma_curv + fit.vertex_sigma * fit.vertex_sigma).sqrt();
    let chi2_min = chi2_values[argmin];
    Ok(FitResult {
        t_best: fit.vertex.clamp(t_grid[0], *t_grid.last().unwrap()),
        sigma_t,
        chi2_min,
        scale_used: scales[argmin],
        t_grid: t_grid.to_vec(),
        chi2_values,
    })
}
