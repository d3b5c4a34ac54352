//! Full thermometry round trip: draw a synthetic 100-sequence experiment at
//! a known temperature, then recover it by chi-square fitting against the
//! Monte-Carlo model.

use tweezersim::flight::{EnergySource, SimPlan};
use tweezersim::harness::synth::synth_experiment;
use tweezersim::numeric::linspace;
use tweezersim::rng::{mix, RngSeed};
use tweezersim::sample::ThermalSpec;
use tweezersim::thermometry::{fit_temperature, FitOptions};
use tweezersim::trap::{build_potential, TrapConfig};

fn main() {
    let cfg = TrapConfig::rb87();
    let pot = build_potential(&cfg).unwrap();
    let t_true = 168e-6;

    let plan = SimPlan {
        n_trajectories: 20_000,
        dt_grid: linspace(0.0, 40e-6, 21),
        source: EnergySource::Thermal(ThermalSpec { temperature: t_true }),
        scale: 0.95,
    };
    let data = synth_experiment(&plan, 100, &pot, &cfg, RngSeed::new(7, 0)).unwrap();

    println!("synthetic data at T = {:.0} uK, 100 sequences per point:", t_true * 1e6);
    for pt in &data.points {
        println!("  dt = {:>4.0} us  p = {:.2} +- {:.3}", pt.dt * 1e6, pt.p, pt.sigma);
    }

    let t_grid = linspace(120e-6, 230e-6, 12);
    let opts = FitOptions::default();
    let fit = fit_temperature(&data, &pot, &cfg, &t_grid, &opts, RngSeed::new(mix(7, 1), 0)).unwrap();

    println!("\nchi-square scan:");
    for (t, chi2) in fit.t_grid.iter().zip(fit.chi2_values.iter()) {
        println!("  T = {:>5.1} uK  chi2 = {:8.2}", t * 1e6, chi2);
    }
    println!(
        "\nbest fit: T = {:.1} +- {:.1} uK (chi2_min = {:.2}, true value {:.0} uK)",
        fit.t_best * 1e6,
        fit.sigma_t * 1e6,
        fit.chi2_min,
        t_true * 1e6
    );
}
