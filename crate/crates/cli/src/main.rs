mod commands;
mod inputs;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

/// Certify stationary polyhedral varifolds as mass-minimizing.
#[derive(Debug, Parser)]
#[command(name = "polycal", version)]
pub struct Args {
    /// validate | stationarity | chainify | certify | minimize | flatnorm |
    /// deform | groupnorm | demo
    pub command: String,
    /// Catalog entry for `demo`.
    pub name: Option<String>,
    #[arg(long = "in", value_name = "FILE")]
    pub inputs: Vec<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = polycal::DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long = "solver-config", value_name = "FILE")]
    pub solver_config: Option<PathBuf>,
    /// Trials for `deform`.
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Perturbation radius for `deform`; defaults to a tenth of the
    /// truncation radius.
    #[arg(long)]
    pub magnitude: Option<f64>,
    /// Truncation radius for `demo`.
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    /// Radial subdivisions for `demo`.
    #[arg(long, default_value_t = 1)]
    pub refinement: usize,
    /// Barycentric refinements applied before `minimize`.
    #[arg(long, default_value_t = 0)]
    pub refine: usize,
    /// Treat the input chain of `minimize` as the target boundary itself.
    #[arg(long)]
    pub as_boundary: bool,
}

/// Exit status 1: a check ran and failed. Exit status 2: bad input.
#[derive(Debug)]
pub enum Failure {
    Check(String),
    Input(String),
}

impl From<polycal::Error> for Failure {
    fn from(e: polycal::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match commands::run(&args) {
        Ok((output, passed)) => {
            let text = serde_json::to_string_pretty(&output).expect("serializable output");
            if let Err(e) = write_output(&args, &text) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(if passed { 0 } else { 1 })
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn write_output(args: &Args, text: &str) -> std::io::Result<()> {
    match &args.out {
        Some(path) => std::fs::write(path, format!("{text}\n")),
        None => match writeln!(std::io::stdout().lock(), "{text}") {
            Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
            r => r,
        },
    }
}
