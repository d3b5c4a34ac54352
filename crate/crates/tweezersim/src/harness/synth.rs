//! Synthetic experimental data: finite-sequence binomial noise on top of the
//! Monte-Carlo model curve.


use rand_distr::{Binomial, Distribution};

use crate::flight::{simulate_rr, FlightError, RRCurve, RRPoint, SimPlan};
use crate::rng::RngSeed;
use crate::trap::{TrapConfig, TrapPotential};

/// Draw a finite-statistics curve: for each release time, the model
/// probability from `plan` (large `n_trajectories`) feeds a
/// Binomial(n_sequences, p) draw. Degenerate outcomes (k = 0 or
/// k = n_sequences) get a Wilson-interval half-width (z = 1) as the sigma
/// floor so no point carries zero uncertainty.
pub fn synth_experiment(
    plan: &SimPlan,
    n_sequences: u64,
    pot: &TrapPotential,
    cfg: &TrapConfig,
    seed: RngSeed,
) -> Result<RRCurve, FlightError> {
    if n_sequences < 1 {
        return Err(FlightError::InvalidPlan("n_sequences must be >= 1".into()));
    }
    let model = simulate_rr(plan, pot, cfg, seed)?;
    // noise stream is separate from the trajectory streams
    let mut rng = seed.with_stream(u64::MAX).rng();
    let n = n_sequences as f64;
    let points = model
        .points
        .iter()
        .map(|m| {
            let k = if m.p <= 0.0 {
                0
            } else if m.p >= 1.0 {
                n_sequences
            } else {
                Binomial::new(n_sequences, m.p).unwrap().sample(&mut rng)
            };
            let p = k as f64 / n;
            let sigma = if k == 0 || k == n_sequences {
                // Wilson half-width at z = 1 for a degenerate count
                0.5 / (n + 1.0)
            } else {
                (p * (1.0 - p) / n).sqrt()
            };
            RRPoint {
                dt: m.dt,
                p,
                sigma,
                n_sequences,
            }
        })
        .collect();
    Ok(RRCurve { points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flight::EnergySource;
    use crate::rng::mix;
    use crate::sample::ThermalSpec;
    use crate::trap::build_potential;

    fn setup() -> (TrapConfig, TrapPotential) {
        let cfg = TrapConfig::rb87();
        let pot = build_potential(&cfg).unwrap();
        (cfg, pot)
    }

    fn plan(t: f64, n_traj: u64) -> SimPlan {
        SimPlan {
            n_trajectories: n_traj,
            dt_grid: (0..11).map(|k| 4e-6 * k as f64).collect(),
            source: EnergySource::Thermal(ThermalSpec { temperature: t }),
            scale: 0.95,
        }
    }

    #[test]
    fn large_n_sequences_converges_to_the_model() {
        let (cfg, pot) = setup();
        let p = plan(168e-6, 20_000);
        let seed = RngSeed::new(3, 0);
        let model = simulate_rr(&p, &pot, &cfg, seed).unwrap();
        let synth = synth_experiment(&p, 1_000_000, &pot, &cfg, seed).unwrap();
        for (m, s) in model.points.iter().zip(synth.points.iter()) {
            assert!(
                (m.p - s.p).abs() < 5.0 * (m.p * (1.0 - m.p) / 1e6).sqrt() + 1e-4,
                "dt = {}",
                m.dt
            );
        }
    }

    #[test]
    fn degenerate_points_get_the_wilson_floor() {
        let (cfg, pot) = setup();
        // 10 ms release time: model probability 0 at every temperature
        let p = SimPlan {
            dt_grid: vec![10e-3],
            ..plan(168e-6, 2000)
        };
        let synth = synth_experiment(&p, 100, &pot, &cfg, RngSeed::new(5, 0)).unwrap();
        assert_eq!(synth.points[0].p, 0.0);
        assert!((synth.points[0].sigma - 0.5 / 101.0).abs() < 1e-15);
    }

    #[test]
    fn no_sigma_is_ever_zero() {
        let (cfg, pot) = setup();
        let p = plan(100e-6, 2000);
        for k in 0..5 {
            let synth = synth_experiment(&p, 100, &pot, &cfg, RngSeed::new(mix(11, k), 0)).unwrap();
            for pt in &synth.points {
                assert!(pt.sigma > 0.0, "dt = {}", pt.dt);
            }
        }
    }

    #[test]
    fn error_bars_match_binomial_statistics_at_half() {
        let (cfg, pot) = setup();
        let p = plan(168e-6, 5000);
        let synth = synth_experiment(&p, 100, &pot, &cfg, RngSeed::new(17, 0)).unwrap();
        // near p = 0.5 the standard error at n = 100 is about 0.05
        let mid: Vec<&RRPoint> = synth
            .points
            .iter()
            .filter(|pt| (pt.p - 0.5).abs() < 0.15)
            .collect();
        assert!(!mid.is_empty());
        for pt in mid {
            assert!((pt.sigma - 0.05).abs() < 0.01, "sigma {}", pt.sigma);
        }
    }

    #[test]
    fn synth_is_deterministic() {
        let (cfg, pot) = setup();
        let p = plan(100e-6, 2000);
        let a = synth_experiment(&p, 100, &pot, &cfg, RngSeed::new(23, 0)).unwrap();
        let b = synth_experiment(&p, 100, &pot, &cfg, RngSeed::new(23, 0)).unwrap();
        assert_eq!(a, b);
    }
}
