//! Truncation cooling: lower the trap to U_min, let the energetic atoms
//! spill out, restore the depth, then measure what is left with
//! release-and-recapture thermometry. Mean energy drops at the cost of
//! survival probability.

use tweezersim::harness::config::ExperimentConfig;
use tweezersim::harness::sweep::run_truncation_sweep;

fn main() {
    let cfg = ExperimentConfig::parse(
        "sequence = truncate_then_rr\n\
         t = 33 uK\n\
         u_min_grid = list(0.4 uK, 1 uK, 3 uK, 10 uK, 40 uK, 300 uK, 2.8 mK)\n\
         n_sequences = 200\n\
         n_trajectories = 10000\n\
         seed = 11\n",
        &[],
    )
    .unwrap();

    let result = run_truncation_sweep(&cfg).unwrap();
    println!("{}", result.columns.join("  "));
    for row in &result.rows {
        println!(
            "{:>8.2} {:>8.3} {:>8.1} {:>10.1} {:>10.1}",
            row[0], row[1], row[2], row[3], row[4]
        );
    }
    let deep = result.rows.last().unwrap();
    let cold = &result.rows[0];
    println!(
        "\nmean-energy reduction factor at U_min = {:.1} uK: {:.1} (survival {:.2})",
        cold[0],
        deep[4] / cold[4],
        cold[1]
    );
}
