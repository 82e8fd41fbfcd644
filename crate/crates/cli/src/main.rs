//! Command-line driver for light-pulse momentum simulations.

mod plot;
mod runner;
mod spec;
mod validate;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use photon_momentum::config::parse_config_value;
use photon_momentum::{default_config, parse_config};

use runner::Summary;
use spec::{parse_value, set_path, Axis, Scenario, SpecError, SweepSpec};

#[derive(Parser)]
#[command(name = "photon-momentum", version, about = "Momentum exchange between a light pulse and a two-level atom")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FidelityArg {
    Adiabatic,
    FullObe,
    OscillatoryOracle,
}

impl FidelityArg {
    fn as_str(self) -> &'static str {
        match self {
            FidelityArg::Adiabatic => "adiabatic",
            FidelityArg::FullObe => "full-obe",
            FidelityArg::OscillatoryOracle => "oscillatory-oracle",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run one pulse passage or a parameter sweep.
    Run {
        /// TOML config; defaults to the built-in Rb-87 setup.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Scenario::PulsePassage)]
        scenario: Scenario,
        /// Override a config key, e.g. `scaled.delta_over_gamma=-3`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        /// Sweep axis: `path=v1,v2`, `path=lin:a:b:n` or `path=log:a:b:n`.
        #[arg(long = "sweep", value_name = "AXIS")]
        sweeps: Vec<String>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        neglect_dxb: bool,
        #[arg(long, value_enum)]
        fidelity: Option<FidelityArg>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Also write plot.py into the output directory.
        #[arg(long)]
        emit_plot_script: bool,
    },
    /// Check a config and print its regime diagnostics.
    Validate {
        path: Option<PathBuf>,
        #[arg(long = "config")]
        config: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String, SpecError> {
    std::fs::read_to_string(path).map_err(|source| SpecError::Read {
        path: path.display().to_string(),
        source,
    })
}

fn base_document(config: Option<&Path>) -> Result<toml::Table, SpecError> {
    match config {
        Some(path) => {
            let text = read(path)?;
            // Parse fully first so errors carry line context.
            parse_config(&text)?;
            Ok(toml::from_str(&text).expect("already parsed"))
        }
        None => {
            let text = default_config().to_toml_string();
            Ok(toml::from_str(&text).expect("canonical document parses"))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn build_spec(
    config: Option<&Path>,
    scenario: Scenario,
    overrides: &[String],
    sweeps: &[String],
    jobs: usize,
    neglect_dxb: bool,
    fidelity: Option<FidelityArg>,
    out: PathBuf,
) -> Result<SweepSpec, SpecError> {
    let mut base = base_document(config)?;
    for o in overrides {
        let (key, value) = o.split_once('=').ok_or_else(|| SpecError::Override(o.clone()))?;
        set_path(&mut base, key.trim(), parse_value(value))?;
    }
    if neglect_dxb {
        set_path(&mut base, "simulation.neglect_dxb", toml::Value::Boolean(true))?;
    }
    if let Some(f) = fidelity {
        set_path(&mut base, "simulation.fidelity", toml::Value::String(f.as_str().into()))?;
    }
    parse_config_value(toml::Value::Table(base.clone()))?;

    let mut axes = sweeps.iter().map(|s| s.parse::<Axis>()).collect::<Result<Vec<_>, _>>()?;
    if axes.is_empty() {
        axes.extend(scenario.default_axis());
    }
    let spec = SweepSpec {
        scenario,
        base,
        axes,
        out_dir: out,
        jobs: jobs.max(1),
    };
    spec.check_paths()?;
    Ok(spec)
}

fn print_comparison(summary: &Summary) {
    let cell = |x: Option<f64>| x.map(|v| format!("{v:.4e}")).unwrap_or_else(|| "-".into());
    println!(
        "{:<12} {:>12} {:>12} {:>12} {:>12} {:>10}",
        "neglect_dxb", "measured", "abraham", "minkowski", "discrim.", "nearest"
    );
    for r in &summary.runs {
        println!(
            "{:<12} {:>12} {:>12} {:>12} {:>12} {:>10}",
            r.neglect_dxb,
            cell(r.measured_shift),
            cell(r.abraham_shift),
            cell(r.minkowski_shift),
            r.discrimination.map(|d| format!("{d:+.4}")).unwrap_or_else(|| "-".into()),
            r.nearest_branch.as_deref().unwrap_or("-"),
        );
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Validate { path, config } => {
            let Some(path) = path.or(config) else {
                eprintln!("error: validate needs a config path");
                return ExitCode::from(2);
            };
            let cfg = read(&path).and_then(|text| parse_config(&text).map_err(SpecError::Config));
            match cfg {
                Ok(cfg) => {
                    print!("{}", validate::regime_report(&cfg));
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {}: {e}", path.display());
                    ExitCode::from(2)
                }
            }
        }
        Command::Run {
            config,
            scenario,
            overrides,
            sweeps,
            jobs,
            neglect_dxb,
            fidelity,
            out,
            emit_plot_script,
        } => {
            let spec = match build_spec(config.as_deref(), scenario, &overrides, &sweeps, jobs, neglect_dxb, fidelity, out) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            let summary = match runner::run_sweep(&spec) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            if emit_plot_script {
                if let Err(e) = std::fs::write(spec.out_dir.join("plot.py"), plot::PLOT_SCRIPT) {
                    eprintln!("error: cannot write plot.py: {e}");
                    return ExitCode::from(2);
                }
            }
            if scenario == Scenario::AbrahamVsMinkowski {
                print_comparison(&summary);
            }
            println!(
                "{} run(s) succeeded, {} failed; summary in {}",
                summary.runs.len(),
                summary.failures.len(),
                spec.out_dir.join("summary.csv").display()
            );
            for f in &summary.failures {
                let at: Vec<String> = f.coordinates.iter().map(|(k, v)| format!("{k}={v}")).collect();
                eprintln!("run failed at [{}]: {}", at.join(", "), f.error);
            }
            if summary.failures.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
