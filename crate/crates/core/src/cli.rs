//! Command-line front end used by the `riskm` binary.
//!
//! Exit codes: `0` success, `1` invalid input (bad arguments, unreadable or
//! malformed files, out-of-domain parameters), `2` numerical failure, `3` a
//! self-test check failed.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde_json::json;

use crate::combination::{combine, combine_to_distortion, Combiner};
use crate::distortion::{check_concave, Distortion, CONCAVITY_TOLERANCE};
use crate::error::{Result, RiskError};
use crate::evaluation::{breakpoint_levels, cvar_curve, gini, lorenz_curve, second_order_dominates};
use crate::io;
use crate::optimizer::{run_experiment, ExperimentConfig};
use crate::risk::{evaluate, RiskSpec};
use crate::selftest;

#[derive(Debug, Parser)]
#[command(name = "riskm", version, about = "Coherent risk measures on empirical loss samples")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CurveArg {
    Cvar,
    Lorenz,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a risk spec on a loss sample; prints {"value", "spec"}.
    Eval {
        /// Risk spec as a JSON file or an inline JSON object.
        #[arg(long)]
        risk: String,
        /// Loss sample CSV: values, or values and probabilities.
        #[arg(long)]
        data: PathBuf,
    },
    /// Write a CVaR or Lorenz curve.
    Curve {
        #[arg(long, value_enum)]
        kind: CurveArg,
        #[arg(long)]
        data: PathBuf,
        /// Largest α on a CVaR curve; the default keeps every breakpoint.
        #[arg(long, default_value_t = 1.0)]
        cutoff: f64,
        /// Number of Lorenz grid cells.
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        /// Output file; standard output by default.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the Lorenz curve (same as `curve --kind lorenz`).
    Lorenz {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value_t = 100)]
        points: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the Gini coefficient of a non-negative sample.
    Gini {
        #[arg(long)]
        data: PathBuf,
    },
    /// Print whether sample A is dominated by B in second order (CVaR at
    /// every level no larger).
    Dominates {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Combine two distortions through a combiner and write the result as a
    /// piecewise distortion.
    Combine {
        #[arg(long)]
        phi0: String,
        #[arg(long)]
        phi1: String,
        #[arg(long)]
        psi: String,
        /// Replace the combination by its least concave majorant.
        #[arg(long)]
        concavify: bool,
        /// Number of grid cells on [0, 1].
        #[arg(long, default_value_t = 1024)]
        resolution: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a training experiment described by a JSON config.
    Optimize {
        #[arg(long)]
        config: PathBuf,
        /// Directory receiving params.json, trace.csv, losses.csv and curves.
        #[arg(long)]
        out: PathBuf,
        /// Overrides the seed in the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Largest α on the written CVaR curve.
        #[arg(long, default_value_t = 1.0)]
        cutoff: f64,
    },
    /// Run the acceptance checks and print one line per check.
    Selftest {
        /// Run a single check.
        #[arg(long)]
        only: Option<usize>,
    },
}

/// Outcome of a command: success or a selftest failure.
enum Status {
    Ok,
    ChecksFailed,
}

/// Parses `args` (including the program name), runs the command writing to
/// `out`, reports errors on standard error and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(Status::Ok) => 0,
        Ok(Status::ChecksFailed) => 3,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_numerical() {
                2
            } else {
                1
            }
        }
    }
}

/// Reads JSON from a file, or parses the argument itself when it starts
/// with `{`.
fn json_arg<T: DeserializeOwned>(arg: &str) -> Result<T> {
    if arg.trim_start().starts_with('{') {
        Ok(serde_json::from_str(arg)?)
    } else {
        io::read_json(arg)
    }
}

fn emit(out: &mut dyn Write, target: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match target {
        Some(p) => std::fs::write(p, bytes)?,
        None => out.write_all(bytes)?,
    }
    Ok(())
}

fn curve_bytes(curve: &crate::Curve, format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Csv => {
            let mut buf = Vec::new();
            curve.write_csv(&mut buf)?;
            Ok(buf)
        }
        Format::Json => {
            let mut s = curve.to_json()?;
            s.push('\n');
            Ok(s.into_bytes())
        }
    }
}

fn lorenz_grid(points: usize) -> Result<Vec<f64>> {
    if points == 0 {
        return Err(RiskError::invalid("--points must be positive"));
    }
    Ok((0..=points).map(|i| i as f64 / points as f64).collect())
}

fn execute(command: Command, out: &mut dyn Write) -> Result<Status> {
    match command {
        Command::Eval { risk, data } => {
            let spec: RiskSpec = json_arg(&risk)?;
            let sample = io::read_sample(&data)?;
            let value = evaluate(&spec, &sample)?;
            if !value.is_finite() {
                return Err(RiskError::NonFinite { step: 0 });
            }
            writeln!(out, "{}", json!({ "value": value, "spec": spec }))?;
        }
        Command::Curve {
            kind,
            data,
            cutoff,
            points,
            format,
            out: target,
        } => {
            let sample = io::read_sample(&data)?;
            let curve = match kind {
                CurveArg::Cvar => cvar_curve(&sample, &breakpoint_levels(&[&sample], cutoff))?,
                CurveArg::Lorenz => lorenz_curve(&sample, &lorenz_grid(points)?)?,
            };
            emit(out, target.as_deref(), &curve_bytes(&curve, format)?)?;
        }
        Command::Lorenz {
            data,
            points,
            format,
            out: target,
        } => {
            let sample = io::read_sample(&data)?;
            let curve = lorenz_curve(&sample, &lorenz_grid(points)?)?;
            emit(out, target.as_deref(), &curve_bytes(&curve, format)?)?;
        }
        Command::Gini { data } => {
            writeln!(out, "{}", gini(&io::read_sample(&data)?)?)?;
        }
        Command::Dominates { a, b } => {
            let (a, b) = (io::read_sample(&a)?, io::read_sample(&b)?);
            writeln!(out, "{}", second_order_dominates(&a, &b, &[]))?;
        }
        Command::Combine {
            phi0,
            phi1,
            psi,
            concavify,
            resolution,
            out: target,
        } => {
            if resolution == 0 {
                return Err(RiskError::invalid("--resolution must be positive"));
            }
            let phi0: Distortion = json_arg(&phi0)?;
            let phi1: Distortion = json_arg(&phi1)?;
            let psi: Combiner = json_arg(&psi)?;
            let f = combine(&phi0, &phi1, &psi);
            let d = if concavify {
                combine_to_distortion(&f)?
            } else {
                let knots: Vec<(f64, f64)> = (0..=resolution)
                    .map(|i| {
                        let t = i as f64 / resolution as f64;
                        (t, f.eval(t))
                    })
                    .collect();
                if !check_concave(&knots, CONCAVITY_TOLERANCE) {
                    return Err(RiskError::invalid(
                        "combined function is not concave; rerun with --concavify",
                    ));
                }
                Distortion::piecewise(knots)?
            };
            let mut text = serde_json::to_string(&d)?;
            text.push('\n');
            emit(out, target.as_deref(), text.as_bytes())?;
        }
        Command::Optimize {
            config,
            out: dir,
            seed,
            cutoff,
        } => {
            let mut cfg: ExperimentConfig = io::read_json(&config)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            cfg.resolve_paths(config.parent().unwrap_or(Path::new(".")));
            let result = run_experiment(&cfg)?;
            result.write_to(&dir, cutoff)?;
            let summary = json!({
                "objective": cfg.objective,
                "steps": result.state.step_count,
                "final_risk": result.trace.last(),
                "params": result.state.params,
                "out": dir,
            });
            writeln!(out, "{summary}")?;
        }
        Command::Selftest { only } => {
            let outcomes = match only {
                Some(id) => vec![selftest::run_check(id)
                    .ok_or_else(|| RiskError::invalid(format!("no check with id {id}")))?],
                None => selftest::run_all(),
            };
            for o in &outcomes {
                writeln!(out, "{o}")?;
            }
            let passed = outcomes.iter().filter(|o| o.passed).count();
            writeln!(out, "{passed}/{} checks passed", outcomes.len())?;
            if passed < outcomes.len() {
                return Ok(Status::ChecksFailed);
            }
        }
    }
    Ok(Status::Ok)
}
