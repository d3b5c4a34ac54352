//! Command-line entry point.
//!
//! Exit codes: 0 success, 2 usage error, 3 malformed config or input file,
//! 4 unreadable or unwritable path, 5 computation failure. Failures print a
//! machine-readable JSON object on stderr.

use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::adiabatic::build_action_map;
use crate::flight::{EnergySource, SimPlan};
use crate::harness::config::{ConfigError, ExperimentConfig, Sequence};
use crate::harness::output::{
    read_rr_csv, write_action_map_csv, write_json, write_rr_csv, write_table_csv, OutputError,
    RunMeta,
};
use crate::harness::sweep::{
    run_adiabatic_sweep, run_spectroscopy_sweep, run_truncation_sweep, SweepError, SweepResult,
};
use crate::harness::synth::synth_experiment;
use crate::rng::RngSeed;
use crate::sample::{ThermalSpec, TruncatedSpec};
use crate::thermometry::{FitModel, FitOptions};

#[derive(Parser)]
#[command(name = "tweezersim", version, about = "Single-atom dipole trap simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Config file (flat key=value with unit suffixes).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override a config key, e.g. --set "t=31 uK". Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
    /// Output directory (default: $TWEEZERSIM_OUT_DIR or the working directory).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a release-and-recapture curve with finite-sequence noise.
    RrSim(Common),
    /// Fit a temperature to a recapture-curve CSV.
    RrFit {
        #[command(flatten)]
        common: Common,
        /// Input CSV (dt_us,p,sigma,n).
        #[arg(long)]
        data: PathBuf,
    },
    /// Analytic adiabatic-lowering spectroscopy sweep.
    Spectroscopy(Common),
    /// Truncate-then-recapture sweep over minimum depths.
    Truncate(Common),
    /// Adiabatic-cooling sweep over minimum depths.
    Adiabatic(Common),
    /// Constant-action escape-energy map as CSV.
    ActionMap(Common),
    /// All sweep tables from one config.
    Figures(Common),
}

enum CliError {
    Config(String),
    Io(String),
    Compute(String),
}

impl CliError {
    fn emit(&self) -> i32 {
        let (kind, msg, code) = match self {
            CliError::Config(m) => ("config", m, 3),
            CliError::Io(m) => ("io", m, 4),
            CliError::Compute(m) => ("compute", m, 5),
        };
        eprintln!(
            "{}",
            serde_json::json!({ "error": msg, "kind": kind, "code": code })
        );
        code
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Trap(inner) => CliError::Compute(inner.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<OutputError> for CliError {
    fn from(e: OutputError) -> Self {
        match e {
            OutputError::Io { .. } => CliError::Io(e.to_string()),
            other => CliError::Config(other.to_string()),
        }
    }
}

impl From<SweepError> for CliError {
    fn from(e: SweepError) -> Self {
        match e {
            SweepError::Config(inner) => inner.into(),
            other => CliError::Compute(other.to_string()),
        }
    }
}

pub fn cli_main(argv: &[String]) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = err.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(err) => err.emit(),
    }
}

fn load_config(common: &Common) -> Result<ExperimentConfig, CliError> {
    let text = match &common.config {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?,
        None => String::new(),
    };
    Ok(ExperimentConfig::parse(&text, &common.sets)?)
}

fn out_dir(common: &Common) -> PathBuf {
    common
        .out
        .clone()
        .or_else(|| std::env::var_os("TWEEZERSIM_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn meta(cfg: &ExperimentConfig) -> RunMeta {
    RunMeta {
        config_sha256: cfg.sha256.clone(),
        seed: cfg.seed,
    }
}

fn sim_plan(cfg: &ExperimentConfig) -> Result<SimPlan, CliError> {
    let source = match cfg.sequence {
        Sequence::TruncateThenRr => {
            let (tc, _) = cfg.build_trap()?;
            let u_min = cfg.u_min_grid[0];
            let u_trunc = crate::adiabatic::map_escape_energy(u_min.min(cfg.depth), cfg.depth, &tc)
                .map_err(|e| CliError::Compute(e.to_string()))?;
            EnergySource::Truncated(TruncatedSpec {
                temperature: cfg.temperature,
                truncation_energy: u_trunc,
                n_bins: cfg.n_bins,
            })
        }
        _ => EnergySource::Thermal(ThermalSpec {
            temperature: cfg.temperature,
        }),
    };
    Ok(SimPlan {
        n_trajectories: cfg.n_trajectories,
        dt_grid: cfg.dt_grid.clone(),
        source,
        scale: cfg.scale,
    })
}

fn write_sweep(path: &Path, result: &SweepResult, meta: &RunMeta) -> Result<(), CliError> {
    write_table_csv(path, &result.columns, &result.rows, meta)?;
    Ok(())
}

fn action_map_table(cfg: &ExperimentConfig) -> Result<crate::adiabatic::ActionMapTable, CliError> {
    let (tc, _) = cfg.build_trap()?;
    let ratios: Vec<f64> = cfg
        .u_min_grid
        .iter()
        .map(|&u| (u / cfg.depth).min(1.0))
        .collect();
    build_action_map(cfg.depth, &ratios, &tc).map_err(|e| CliError::Compute(e.to_string()))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::RrSim(common) => {
            let cfg = load_config(&common)?;
            let (tc, pot) = cfg.build_trap()?;
            let plan = sim_plan(&cfg)?;
            let curve = synth_experiment(
                &plan,
                cfg.n_sequences,
                &pot,
                &tc,
                RngSeed::new(cfg.seed, 0),
            )
            .map_err(|e| CliError::Compute(e.to_string()))?;
            write_rr_csv(&out_dir(&common).join("rr_curve.csv"), &curve, &meta(&cfg))?;
            Ok(())
        }
        Command::RrFit { common, data } => {
            let cfg = load_config(&common)?;
            let (tc, pot) = cfg.build_trap()?;
            let curve = read_rr_csv(&data)?;
            let opts = FitOptions {
                n_trajectories: cfg.n_trajectories,
                scale: cfg.scale,
                model: FitModel::Thermal,
                fit_plateau: false,
                clamp_upper_edge: false,
            };
            let fit = crate::harness::sweep::fit_around(
                &curve,
                &pot,
                &tc,
                cfg.temperature,
                &opts,
                RngSeed::new(crate::rng::mix(cfg.seed, 0xf17), 0),
            )
            .map_err(|e| CliError::Compute(e.to_string()))?;
            write_json(&out_dir(&common).join("fit.json"), &fit, &meta(&cfg))?;
            Ok(())
        }
        Command::Spectroscopy(common) => {
            let cfg = load_config(&common)?;
            let result = run_spectroscopy_sweep(&cfg)?;
            write_sweep(&out_dir(&common).join("spectroscopy.csv"), &result, &meta(&cfg))
        }
        Command::Truncate(common) => {
            let cfg = load_config(&common)?;
            let result = run_truncation_sweep(&cfg)?;
            write_sweep(&out_dir(&common).join("truncation.csv"), &result, &meta(&cfg))
        }
        Command::Adiabatic(common) => {
            let cfg = load_config(&common)?;
            let result = run_adiabatic_sweep(&cfg)?;
            write_sweep(&out_dir(&common).join("adiabatic.csv"), &result, &meta(&cfg))
        }
        Command::ActionMap(common) => {
            let cfg = load_config(&common)?;
            let table = action_map_table(&cfg)?;
            write_action_map_csv(&out_dir(&common).join("action_map.csv"), &table, &meta(&cfg))?;
            Ok(())
        }
        Command::Figures(common) => {
            let cfg = load_config(&common)?;
            let dir = out_dir(&common);
            let m = meta(&cfg);
            write_sweep(&dir.join("spectroscopy.csv"), &run_spectroscopy_sweep(&cfg)?, &m)?;
            write_action_map_csv(&dir.join("action_map.csv"), &action_map_table(&cfg)?, &m)?;
            write_sweep(&dir.join("truncation.csv"), &run_truncation_sweep(&cfg)?, &m)?;
            write_sweep(&dir.join("adiabatic.csv"), &run_adiabatic_sweep(&cfg)?, &m)?;
            Ok(())
        }
    }
}
