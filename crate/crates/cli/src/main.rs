use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nvsq::config::Config;
use nvsq::output::{csv_string, to_json};
use nvsq::presets::figure_preset;
use nvsq::sweep::{run_sweep, SweepResult, SweepSpec};
use nvsq::validate::{validate, Level, Tamper};
use nvsq::{CliError, ENV_OUT_DIR, ENV_THREADS};
use nvsqueeze::model::{detuning_for_resonance, dressed_frame};
use nvsqueeze::moments::{stability_check, steady_moments_unchecked, quadrature_variance};
use nvsqueeze::reduced::coefficients_exact;
use nvsqueeze::spinsolver::{spin_steady_closed, spin_steady_numeric};
use serde_json::json;

#[derive(Parser)]
#[command(name = "nvsq", version, about = "Steady-state squeezing of a levitated NV nanodiamond")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the sweep described by a config file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// CSV destination (default: stdout, or $NVSQ_OUT_DIR/sweep.csv).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the JSON mirror (next to --out, or to stdout).
        #[arg(long)]
        json: bool,
        #[arg(long, env = ENV_THREADS)]
        threads: Option<usize>,
    },
    /// Regenerate the data behind one figure (fig4 … fig10).
    Figure {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
        #[arg(long, env = ENV_THREADS)]
        threads: Option<usize>,
    },
    /// Run the oracle suites; exits 3 if a gating family fails.
    Validate {
        #[arg(long, value_enum, default_value = "quick")]
        level: Level,
    },
    /// Spin steady state (closed form and numerical) for the configured parameters.
    SpinSteady {
        #[arg(long)]
        config: PathBuf,
    },
    /// Reduced-equation coefficients, stability and steady moments.
    Coeffs {
        #[arg(long)]
        config: PathBuf,
    },
    /// Detuning that puts ω_bc on resonance with ω_m.
    Resonance {
        #[arg(long)]
        omega0: f64,
        #[arg(long)]
        omega1: f64,
        #[arg(long, default_value_t = 1.0)]
        omega_m: f64,
    },
}

fn default_out(name: &str) -> Option<PathBuf> {
    std::env::var_os(ENV_OUT_DIR).map(|d| Path::new(&d).join(name))
}

fn emit(res: &SweepResult, out: Option<PathBuf>, json: bool, default_name: &str) -> Result<(), CliError> {
    match out.or_else(|| default_out(&format!("{default_name}.csv"))) {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            std::fs::write(&path, csv_string(res))?;
            if json {
                let text = serde_json::to_string_pretty(&to_json(res)).expect("json");
                std::fs::write(path.with_extension("json"), text + "\n")?;
            }
        }
        None => {
            let mut o = std::io::stdout().lock();
            if json {
                writeln!(o, "{}", serde_json::to_string_pretty(&to_json(res)).expect("json"))?;
            } else {
                o.write_all(csv_string(res).as_bytes())?;
            }
        }
    }
    Ok(())
}

fn sweep(spec: &SweepSpec, threads: Option<usize>) -> Result<SweepResult, CliError> {
    if threads == Some(0) {
        return Err(CliError::Params("thread count must be >= 1".into()));
    }
    run_sweep(spec, threads).map_err(CliError::Params)
}

fn print_json(v: serde_json::Value) -> Result<(), CliError> {
    writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(&v).expect("json"))?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Sweep { config, out, json, threads } => {
            let spec = Config::load(&config)?.sweep_spec()?;
            emit(&sweep(&spec, threads)?, out, json, "sweep")
        }
        Cmd::Figure { name, out, json, threads } => {
            let spec = figure_preset(&name)?;
            emit(&sweep(&spec, threads)?, out, json, &name)
        }
        Cmd::Validate { level } => {
            let report = validate(level, Tamper::default());
            print_json(serde_json::to_value(&report).expect("json"))?;
            if report.passed {
                Ok(())
            } else {
                let failed: Vec<_> = report.families.iter().filter(|f| !f.passed).map(|f| f.name).collect();
                Err(CliError::Validation(failed.join(", ")))
            }
        }
        Cmd::SpinSteady { config } => {
            let p = Config::load(&config)?.params()?;
            p.validate()?;
            let closed = spin_steady_closed(&p);
            let numeric = spin_steady_numeric(&p)?;
            let diff = (&closed.bare.matrix() - &numeric.bare.matrix()).max_abs();
            print_json(json!({
                "params": p,
                "frame": dressed_frame(&p),
                "closed": closed,
                "numeric": numeric,
                "max_abs_difference": diff,
            }))
        }
        Cmd::Coeffs { config } => {
            let p = Config::load(&config)?.params()?;
            p.validate()?;
            let frame = dressed_frame(&p);
            let c = coefficients_exact(&frame, &spin_steady_closed(&p), p.gamma1)?;
            let st = stability_check(&c, p.gamma_m);
            let steady = if st.stable {
                let (n, pair) = steady_moments_unchecked(&c, p.gamma_m, p.n_th);
                Some(quadrature_variance(n, pair)?)
            } else {
                None
            };
            print_json(json!({
                "params": p,
                "frame": frame,
                "rwa_valid": frame.rwa_check(&p).valid,
                "coefficients": c,
                "stable": st.stable,
                "max_re_eigenvalue": st.max_re,
                "steady_state": steady,
            }))
        }
        Cmd::Resonance { omega0, omega1, omega_m } => {
            let delta = detuning_for_resonance(omega_m, omega0, omega1)?;
            print_json(json!({ "omega_m": omega_m, "omega0": omega0, "omega1": omega1, "delta": delta }))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
