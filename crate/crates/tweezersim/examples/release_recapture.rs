//! Release-and-recapture curves for a hot and a cold thermal ensemble,
//! printed side by side. The cold atoms stay recapturable much longer
//! because their velocity spread is smaller.

use tweezersim::constants::KB;
use tweezersim::flight::{simulate_rr, EnergySource, SimPlan};
use tweezersim::rng::RngSeed;
use tweezersim::sample::ThermalSpec;
use tweezersim::trap::{potential_at_depth, TrapConfig};

fn main() {
    let cfg_hot = TrapConfig::rb87();
    let pot_hot = tweezersim::trap::build_potential(&cfg_hot).unwrap();
    let (cfg_cold, pot_cold) = potential_at_depth(&cfg_hot, 2.5e-3 * KB).unwrap();

    let dt_grid: Vec<f64> = (0..=20).map(|k| 5e-6 * k as f64).collect();
    let plan = |t: f64| SimPlan {
        n_trajectories: 20_000,
        dt_grid: dt_grid.clone(),
        source: EnergySource::Thermal(ThermalSpec { temperature: t }),
        scale: 0.95,
    };

    let seed = RngSeed::new(42, 0);
    let hot = simulate_rr(&plan(168e-6), &pot_hot, &cfg_hot, seed).unwrap();
    let cold = simulate_rr(&plan(31e-6), &pot_cold, &cfg_cold, seed).unwrap();

    println!("{:>10} {:>16} {:>16}", "dt (us)", "p @ 168 uK", "p @ 31 uK");
    for (h, c) in hot.points.iter().zip(cold.points.iter()) {
        println!(
            "{:>10.0} {:>8.3} +- {:.3} {:>8.3} +- {:.3}",
            h.dt * 1e6,
            h.p,
            h.sigma,
            c.p,
            c.sigma
        );
    }
}
