//! Command-line entry point; see [`run_cli`].

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use httool_core::transforms::{evaluate_transform, TransformKind, TransformParams};

use crate::config::{load_config, GridSpec, OUTPUT_DIR_ENV};
use crate::error::CliError;
use crate::estimate::estimate_from_data;
use crate::scenario::run_scenario;

#[derive(Parser)]
#[command(name = "httool", version, about = "Truncated-moment, tail-integral and Williamson transform diagnostics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the diagnostics of a scenario file.
    Run { config: PathBuf },
    /// Estimate regular-variation indices of H and W from a samples file.
    Estimate {
        samples: PathBuf,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        t: f64,
        /// x0:factor:count
        #[arg(long, default_value = "10:2:21")]
        grid: GridSpec,
        /// Defaults to $HTTOOL_OUTPUT_DIR, then the current directory.
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Evaluate one transform of the scenario's model at a point.
    Transform {
        config: PathBuf,
        #[arg(long)]
        kind: TransformKind,
        #[arg(long)]
        x: f64,
    },
}

fn fail(err: CliError) -> i32 {
    eprintln!("httool: {err}");
    err.exit_code()
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code: 0 success, 1 non-convergence, 2 invalid config or data, 3 I/O failure.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match cli.command {
        Command::Run { config } => {
            let cfg = match load_config(&config) {
                Ok(cfg) => cfg,
                Err(e) => return fail(e),
            };
            match run_scenario(&cfg) {
                Ok(summary) => {
                    for o in &summary.outcomes {
                        let verdict = if o.converged { "converged" } else { "NOT CONVERGED" };
                        println!("{:<12} {:<14} final_error={:e}", o.name, verdict, o.final_error);
                    }
                    println!("outputs in {}", cfg.output_dir.display());
                    summary.exit_code()
                }
                Err(e) => fail(e),
            }
        }
        Command::Estimate {
            samples,
            alpha,
            t,
            grid,
            output_dir,
        } => {
            let dir = output_dir
                .or_else(|| std::env::var_os(OUTPUT_DIR_ENV).filter(|d| !d.is_empty()).map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from("."));
            match estimate_from_data(&samples, alpha, t, &grid, &dir) {
                Ok(summary) => {
                    print!("{}", summary.render());
                    0
                }
                Err(e) => fail(e),
            }
        }
        Command::Transform { config, kind, x } => {
            let result = load_config(&config).and_then(|cfg| {
                let model = cfg.build_model()?;
                let p = TransformParams::with_quad(cfg.alpha, cfg.quad)
                    .map_err(|e| CliError::config("alpha", e.to_string()))?;
                Ok(evaluate_transform(&model, kind, &p, x))
            });
            match result {
                Ok(Ok(v)) => {
                    println!("{v}");
                    0
                }
                Ok(Err(e)) => {
                    eprintln!("httool: {e}");
                    if matches!(e, httool_core::Error::NonConvergence { .. }) {
                        1
                    } else {
                        2
                    }
                }
                Err(e) => fail(e),
            }
        }
    }
}
