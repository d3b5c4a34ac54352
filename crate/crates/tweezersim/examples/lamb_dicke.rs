//! Figures of merit for coherent manipulation: mean vibrational number,
//! Lamb-Dicke parameter and thermal localization, before and after cooling,
//! and their scaling when the trap depth is raised adiabatically.

use tweezersim::analytics::{eta_th_depth_scaling, motion_figures};
use tweezersim::constants::KB;
use tweezersim::trap::{build_potential, TrapConfig};

fn main() {
    let cfg = TrapConfig::rb87();
    let pot = build_potential(&cfg).unwrap();
    let recoil = 780e-9;

    println!("2.8 mK trap, 780 nm fluorescence recoil:");
    for (label, e_mean_uk) in [("thermal 33 uK ensemble", 100.0), ("truncation-cooled", 30.0)] {
        let figs = motion_figures(e_mean_uk * 1e-6 * KB, 33e-6, &pot, &cfg, recoil);
        println!(
            "  {label:<24} <E> = {e_mean_uk:>5.0} uK  n_perp = {:.2}  eta_LD = {:.3}  eta_th = {:.3}",
            figs.n_perp, figs.eta_ld, figs.eta_th
        );
    }

    let base = motion_figures(100e-6 * KB, 33e-6, &pot, &cfg, recoil);
    println!("\nlocalization vs adiabatic depth increase (eta_th ~ U^(-1/4)):");
    for factor in [1.0, 4.0, 16.0] {
        println!(
            "  U -> {factor:>4.0} x U0: eta_th = {:.3}",
            eta_th_depth_scaling(base.eta_th, pot.u0, factor * pot.u0)
        );
    }
}
