//! Derived trap quantities for the reference 2.8 mK tweezer: oscillation
//! frequencies, Rayleigh range and the gravity-limited effective depth at a
//! few laser powers.

use tweezersim::constants::KB;
use tweezersim::trap::{build_potential, TrapConfig};

fn main() {
    let cfg = TrapConfig::rb87();
    let pot = build_potential(&cfg).unwrap();

    println!("reference trap ({} mW, waist {} um):", cfg.power * 1e3, cfg.waist * 1e6);
    println!("  U0/kB          = {:.1} uK", pot.u0 / KB * 1e6);
    println!("  nu_perp        = {:.1} kHz", pot.nu_perp() / 1e3);
    println!("  nu_par         = {:.1} kHz", pot.nu_par() / 1e3);
    println!("  Rayleigh range = {:.2} um", pot.z_r * 1e6);
    println!(
        "  effective depth = {:.1} uK ({:.3} of U0, gravity barrier at y = {:.2} um)",
        pot.effective_depth / KB * 1e6,
        pot.effective_depth / pot.u0,
        pot.barrier_offset * 1e6
    );
    println!(
        "  no-barrier threshold U0/kB = {:.3} uK",
        cfg.no_barrier_threshold() / KB * 1e6
    );

    println!("\npower scaling:");
    println!("{:>10} {:>12} {:>12} {:>14} {:>12}", "P (mW)", "U0 (uK)", "nu_perp", "nu_par", "eff/U0");
    for p_mw in [0.05, 0.5, 2.5, 10.0, 20.0] {
        let pot = build_potential(&cfg.with_power(p_mw * 1e-3)).unwrap();
        println!(
            "{:>10.2} {:>12.1} {:>9.1} kHz {:>11.2} kHz {:>12.4}",
            p_mw,
            pot.u0 / KB * 1e6,
            pot.nu_perp() / 1e3,
            pot.nu_par() / 1e3,
            pot.effective_depth / pot.u0
        );
    }
}
