//! Adiabatic cooling along T/sqrt(U) = const: lower the depth slowly, fit
//! the temperature at each depth, and check that the default smoothstep
//! ramp actually satisfies the adiabaticity criterion.

use tweezersim::adiabatic::{check_adiabaticity, hold_time_check, RampProfile};
use tweezersim::constants::KB;
use tweezersim::harness::config::ExperimentConfig;
use tweezersim::harness::sweep::run_adiabatic_sweep;
use tweezersim::trap::TrapConfig;

fn main() {
    let cfg = ExperimentConfig::parse(
        "sequence = adiabatic_rr\n\
         t = 33 uK\n\
         u_min_grid = list(12 uK, 50 uK, 200 uK, 700 uK, 2.8 mK)\n\
         n_sequences = 200\n\
         n_trajectories = 8000\n\
         seed = 5\n",
        &[],
    )
    .unwrap();

    let result = run_adiabatic_sweep(&cfg).unwrap();
    println!("{}", result.columns.join("  "));
    for row in &result.rows {
        println!(
            "{:>9.1} {:>7.3} {:>8.2} {:>10.2} {:>10.1} {:>10.2}",
            row[0], row[1], row[2], row[3], row[4], row[5]
        );
    }

    let tc = TrapConfig::rb87();
    let u_i = 2.8e-3 * KB;
    let u_f = 12e-6 * KB;
    for (name, ramp) in [
        ("linear", RampProfile::linear(u_i, u_f, 2.5e-3, 4001)),
        ("smoothstep", RampProfile::smoothstep(u_i, u_f, 2.5e-3, 4001)),
    ] {
        let (margin, at) = check_adiabaticity(&ramp, &tc).unwrap();
        println!(
            "\n{name} ramp 2.8 mK -> 12 uK over 2.5 ms: max |domega/dt|/omega^2 = {margin:.2} at t = {:.2} ms",
            at * 1e3
        );
    }
    println!(
        "20 ms hold at 12 uK satisfies the escape-time criterion: {}",
        hold_time_check(u_f, 20e-3, &tc)
    );
}
