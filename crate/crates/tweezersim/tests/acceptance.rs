//! End-to-end acceptance checks, one test per criterion. Each prints a
//! single PASS line when it succeeds (visible with --nocapture).

use approx::assert_relative_eq;
use tweezersim::adiabatic::{action_half_axis, map_energy, map_escape_energy};
use tweezersim::analytics::{f_th, mean_energy_truncated, motion_figures, p_surv};
use tweezersim::constants::{KB, RB87_MASS};
use tweezersim::flight::{EnergySource, SimPlan};
use tweezersim::harness::config::ExperimentConfig;
use tweezersim::harness::output::{write_table_csv, RunMeta};
use tweezersim::harness::sweep::{run_adiabatic_sweep, run_truncation_sweep};
use tweezersim::harness::synth::synth_experiment;
use tweezersim::numeric::{adaptive_simpson, linspace};
use tweezersim::rng::{mix, RngSeed};
use tweezersim::sample::{sample_thermal, sample_truncated, ThermalSpec, TruncatedSpec};
use tweezersim::thermometry::{fit_temperature, FitOptions};
use tweezersim::trap::{build_potential, potential_at_depth, potential_energy, TrapConfig};

fn pass(n: u32, what: &str) {
    println!("criterion {n:02} {what}: PASS");
}

#[test]
fn criterion_01_frequency_self_consistency() {
    let cfg = TrapConfig::rb87();
    let pot = build_potential(&cfg).unwrap();
    assert_relative_eq!(pot.nu_perp(), 160e3, max_relative = 0.05);
    assert_relative_eq!(pot.nu_par(), 30e3, max_relative = 0.10);
    pass(1, "frequency self-consistency");
}

#[test]
fn criterion_02_closed_forms_vs_quadrature() {
    let t = 33e-6;
    let kt = KB * t;
    let mut eta = 1e-3;
    while eta <= 30.0 {
        let quad = adaptive_simpson(&|u: f64| f_th(u * kt, t) * kt, 0.0, eta, 1e-13);
        assert!(
            (p_surv(eta * kt, t) - quad).abs() < 1e-9,
            "p_surv mismatch at eta = {eta}"
        );
        if quad > 0.0 {
            let first = adaptive_simpson(&|u: f64| u * kt * f_th(u * kt, t) * kt, 0.0, eta, 1e-15);
            let expected = first / quad;
            assert_relative_eq!(mean_energy_truncated(t, eta * kt), expected, max_relative = 1e-8);
        }
        eta *= 1.45;
    }
    pass(2, "closed forms vs quadrature");
}

#[test]
fn criterion_03_truncation_limits() {
    let t = 33e-6;
    let kt = KB * t;
    assert_relative_eq!(mean_energy_truncated(t, 50.0 * kt), 3.0 * kt, max_relative = 1e-6);
    let u = 1e-4 * kt;
    assert_relative_eq!(mean_energy_truncated(t, u), 0.75 * u, max_relative = 1e-6);
    pass(3, "truncation limits");
}

#[test]
fn criterion_04_figures_of_merit() {
    let cfg = TrapConfig::rb87();
    let pot = build_potential(&cfg).unwrap();
    let hot = motion_figures(100e-6 * KB, 33e-6, &pot, &cfg, 780e-9);
    assert!((hot.n_perp - 4.3).abs() <= 0.1, "n_perp {}", hot.n_perp);
    assert!((hot.eta_ld - 0.20).abs() <= 0.01, "eta_ld {}", hot.eta_ld);
    assert!((hot.eta_th - 0.56).abs() <= 0.02, "eta_th {}", hot.eta_th);
    let cold = motion_figures(30e-6 * KB, 33e-6, &pot, &cfg, 780e-9);
    assert!((cold.n_perp - 1.3).abs() <= 0.1, "n_perp {}", cold.n_perp);
    pass(4, "figures of merit");
}

fn round_trip(t_true: f64, depth: f64, n_sequences: u64, dt_max: f64, seed: u64) -> (f64, f64) {
    let base = TrapConfig::rb87();
    let (cfg, pot) = potential_at_depth(&base, depth).unwrap();
    let plan = SimPlan {
        n_trajectories: 10_000,
        dt_grid: linspace(0.0, dt_max, 21),
        source: EnergySource::Thermal(ThermalSpec { temperature: t_true }),
        scale: 0.95,
    };
    let data = synth_experiment(&plan, n_sequences, &pot, &cfg, RngSeed::new(seed, 0)).unwrap();
    let t_grid = linspace(0.55 * t_true, 1.55 * t_true, 11);
    let fit = fit_temperature(
        &data,
        &pot,
        &cfg,
        &t_grid,
        &FitOptions::default(),
        RngSeed::new(mix(seed, 0xace), 0),
    )
    .unwrap();
    (fit.t_best, fit.sigma_t)
}

#[test]
fn criterion_05_thermometry_round_trip() {
    // hot dataset in the full-depth trap
    let (t_hot, s_hot) = round_trip(168e-6, 2.8e-3 * KB, 100, 40e-6, 2024);
    assert!(
        (t_hot - 168e-6).abs() < 3.0 * s_hot,
        "hot: {} +- {} uK",
        t_hot * 1e6,
        s_hot * 1e6
    );
    assert!(
        s_hot > 1e-6 && s_hot < 20e-6,
        "hot sigma {} uK not of order 6 uK",
        s_hot * 1e6
    );
    // cold dataset in the 2.5 mK trap, with more sequences
    let (t_cold, s_cold) = round_trip(31e-6, 2.5e-3 * KB, 200, 120e-6, 99);
    assert!(
        (t_cold - 31e-6).abs() < 3.0 * s_cold,
        "cold: {} +- {} uK",
        t_cold * 1e6,
        s_cold * 1e6
    );
    assert!(
        s_cold > 0.2e-6 && s_cold < 4e-6,
        "cold sigma {} uK not of order 1 uK",
        s_cold * 1e6
    );
    pass(5, "thermometry round trip");
}

#[test]
fn criterion_06_action_map_oracle() {
    // quadrature vs the analytic harmonic action
    let m = RB87_MASS;
    let omega = 2.0e6;
    let harmonic = |q: f64| 0.5 * m * omega * omega * q * q;
    for k in 0..=8 {
        let e = 1e-29 * 10f64.powf(k as f64 / 2.0);
        let q_lim = (2.0 * e / (m * omega * omega)).sqrt() * 1.4;
        let s = action_half_axis(e, m, harmonic, 0.0, q_lim).unwrap();
        assert_relative_eq!(s, std::f64::consts::PI * e / (2.0 * omega), max_relative = 1e-6);
    }

    // dynamical oracle: velocity-Verlet on the gravity-axis cut while the
    // depth ramps down at constant margin |domega/dt|/omega^2 = 1e-3
    let cfg = TrapConfig::rb87();
    let u_i = 2.8e-3 * KB;
    let (_, pot_i) = potential_at_depth(&cfg, u_i).unwrap();
    let w = cfg.waist;
    let mg = cfg.atom_mass * cfg.gravity;
    let eps = 1e-3;
    for r in [0.01, 0.05, 0.2, 0.5, 0.9] {
        let u_f = r * u_i;
        let (_, pot_f) = potential_at_depth(&cfg, u_f).unwrap();
        let e_i = map_escape_energy(u_f, u_i, &cfg).unwrap();
        let e0 = 0.995 * e_i;

        let omega0 = pot_i.omega_perp;
        let u_of = |s: f64| u_i / (s * s);
        let force = |q: f64, u0: f64| -(u0 * 4.0 * q / (w * w) * (-2.0 * q * q / (w * w)).exp() + mg);

        let mut q = pot_i.minimum_offset;
        let mut v = (2.0 * e0 / m).sqrt();
        let mut t = 0.0f64;
        let s_end = (u_i / u_f).sqrt();
        loop {
            let s = 1.0 + eps * omega0 * t;
            if s >= s_end {
                break;
            }
            let omega_t = omega0 / s;
            let dt = 2.0 * std::f64::consts::PI / omega_t / 400.0;
            let u0 = u_of(s);
            let a0 = force(q, u0) / m;
            q += v * dt + 0.5 * a0 * dt * dt;
            let s1 = 1.0 + eps * omega0 * (t + dt);
            let a1 = force(q, u_of(s1.min(s_end))) / m;
            v += 0.5 * (a0 + a1) * dt;
            t += dt;
        }
        let e_final = 0.5 * m * v * v + potential_energy(&pot_f, &cfg, 0.0, q, 0.0);
        let predicted = map_energy(e0, u_i, u_f, &cfg).unwrap();
        assert!(
            (e_final / predicted - 1.0).abs() < 0.02,
            "ratio {r}: trajectory {e_final:.4e}, map {predicted:.4e}"
        );
        // starting just below the mapped escape energy lands at the shallow
        // trap's escape threshold
        assert!(
            (e_final / pot_f.effective_depth - 1.0).abs() < 0.02,
            "ratio {r}: final {e_final:.4e} vs depth {:.4e}",
            pot_f.effective_depth
        );
    }
    pass(6, "action-map oracle");
}

#[test]
fn criterion_07_truncation_sweep_reproduction() {
    let cfg = ExperimentConfig::parse(
        "sequence = truncate_then_rr\n\
         t = 33 uK\n\
         u_min_grid = list(0.45 uK, 0.5 uK, 0.55 uK, 0.6 uK)\n\
         n_sequences = 200\n\
         n_trajectories = 10000\n\
         dt_grid = linspace(0 us, 120 us, 21)\n\
         seed = 314\n",
        &[],
    )
    .unwrap();
    let result = run_truncation_sweep(&cfg).unwrap();
    let (tc, _) = cfg.build_trap().unwrap();
    // pick the shallowest grid point whose analytic truncation survival is
    // still at least 0.1
    let surv = |row: &Vec<f64>| {
        let u_min = row[0] * 1e-6 * KB;
        let u_trunc = map_escape_energy(u_min, cfg.depth, &tc).unwrap();
        p_surv(u_trunc, cfg.temperature)
    };
    let row = result
        .rows
        .iter()
        .filter(|r| surv(r) >= 0.1)
        .min_by(|a, b| surv(a).partial_cmp(&surv(b)).unwrap())
        .unwrap();
    let baseline = 3.0 * cfg.temperature * 1e6; // untruncated <E>/kB in uK
    let reduction = baseline / row[4];
    assert!(
        (reduction - 3.3).abs() <= 0.7,
        "reduction {reduction:.2} at u_min {:.2} uK (<E> {:.1} uK, p_rr0 {:.3})",
        row[0],
        row[4],
        row[1]
    );
    assert!(row[1] < 0.3, "p_rr0 {:.3} should be strongly suppressed", row[1]);
    pass(7, "truncation-sweep reproduction");
}

#[test]
fn criterion_08_adiabatic_scaling_slope() {
    let cfg = ExperimentConfig::parse(
        "sequence = adiabatic_rr\n\
         t = 33 uK\n\
         u_min_grid = logspace(12 uK, 2800 uK, 8)\n\
         n_sequences = 400\n\
         n_trajectories = 10000\n\
         seed = 2718\n",
        &[],
    )
    .unwrap();
    let result = run_adiabatic_sweep(&cfg).unwrap();
    let pts: Vec<(f64, f64)> = result
        .rows
        .iter()
        .map(|row| (row[0].ln(), row[2].ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    assert!((slope - 0.5).abs() <= 0.02, "log-log slope {slope:.4}");
    pass(8, "adiabatic scaling slope");
}

#[test]
fn criterion_09_sampler_properties() {
    let cfg = TrapConfig::rb87();
    let pot = build_potential(&cfg).unwrap();
    let t = 33e-6;

    // thermal mean energy 3 kB T within 2% at 1e5 draws
    let spec = ThermalSpec { temperature: t };
    let n = 100_000u64;
    let mean: f64 = (0..n)
        .map(|i| {
            let state = sample_thermal(&spec, &pot, &cfg, RngSeed::new(9, i));
            tweezersim::sample::harmonic_energy(&state, &pot, &cfg)
        })
        .sum::<f64>()
        / n as f64;
    assert_relative_eq!(mean, 3.0 * KB * t, max_relative = 0.02);

    // truncated sampler never exceeds the cutoff
    let u_trunc = 1.5 * KB * t;
    let tspec = TruncatedSpec {
        temperature: t,
        truncation_energy: u_trunc,
        n_bins: 10,
    };
    for i in 0..20_000 {
        let state = sample_truncated(&tspec, &pot, &cfg, RngSeed::new(10, i));
        let e = tweezersim::sample::harmonic_energy(&state, &pot, &cfg);
        assert!(e <= u_trunc * (1.0 + 1e-9), "draw {i}: {e:.6e}");
    }

    // Kolmogorov-Smirnov on the smallest simplex part: the minimum of a
    // uniform two-cut split of a fixed total has cdf 1 - (1 - 3 x)^2 on
    // [0, 1/3]; equivalently the sorted-uniform first gap
    let n_ks = 20_000usize;
    let mut smallest: Vec<f64> = (0..n_ks)
        .map(|i| {
            let (a, b, c) = tweezersim::sample::simplex_split(1.0, RngSeed::new(11, i as u64));
            a.min(b).min(c)
        })
        .collect();
    smallest.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut d = 0.0f64;
    for (i, &x) in smallest.iter().enumerate() {
        let cdf = 1.0 - (1.0 - 3.0 * x.min(1.0 / 3.0)).powi(2);
        let lo = i as f64 / n_ks as f64;
        let hi = (i + 1) as f64 / n_ks as f64;
        d = d.max((cdf - lo).abs()).max((cdf - hi).abs());
    }
    let critical = 1.63 / (n_ks as f64).sqrt();
    assert!(d < critical, "KS statistic {d:.4} exceeds 1% critical {critical:.4}");
    pass(9, "sampler properties");
}

#[test]
fn criterion_10_determinism_across_worker_counts() {
    let cfg = ExperimentConfig::parse(
        "sequence = adiabatic_rr\n\
         t = 33 uK\n\
         u_min_grid = list(50 uK, 2.8 mK)\n\
         n_sequences = 100\n\
         n_trajectories = 3000\n\
         seed = 1234\n",
        &[],
    )
    .unwrap();
    let pool1 = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let pool4 = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let a = pool1.install(|| run_adiabatic_sweep(&cfg).unwrap());
    let b = pool4.install(|| run_adiabatic_sweep(&cfg).unwrap());
    assert_eq!(a.rows, b.rows);

    let dir = tempfile::tempdir().unwrap();
    let meta = RunMeta {
        config_sha256: cfg.sha256.clone(),
        seed: cfg.seed,
    };
    let pa = dir.path().join("a.csv");
    let pb = dir.path().join("b.csv");
    write_table_csv(&pa, &a.columns, &a.rows, &meta).unwrap();
    write_table_csv(&pb, &b.columns, &b.rows, &meta).unwrap();
    assert_eq!(std::fs::read(&pa).unwrap(), std::fs::read(&pb).unwrap());
    pass(10, "determinism across worker counts");
}
