use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use chernforms::harness::{emit_report, run_named, Config, Format};
use clap::Parser;

/// Runs the verification scenarios and prints a report.
#[derive(Parser, Debug)]
#[command(name = "verify", version)]
struct Args {
    /// Scenario name, or `all`.
    scenario: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Multiplies every tolerance.
    #[arg(long, default_value_t = 1.0)]
    tol_scale: f64,
    /// Quadrature order override.
    #[arg(long)]
    quad_order: Option<usize>,
    /// `json` or `markdown`.
    #[arg(long, default_value = "json")]
    format: String,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run checks on the rayon pool.
    #[arg(long)]
    parallel: bool,
    /// Report zero runtimes so reports are byte-identical.
    #[arg(long)]
    no_timings: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let config = Config {
        seed: args.seed,
        tol_scale: args.tol_scale,
        quad_order: args.quad_order,
        parallel: args.parallel,
        timings: !args.no_timings,
    };
    let format: Format = match args.format.parse() {
        Ok(f) => f,
        Err(e) => {
            eprintln!("verify: {e}");
            return ExitCode::from(2);
        }
    };
    let report = match run_named(&args.scenario, &config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("verify: {e}");
            return ExitCode::from(2);
        }
    };
    let bytes = emit_report(&report, format);
    let written = match &args.out {
        Some(path) => fs::write(path, &bytes),
        None => std::io::stdout().write_all(&bytes),
    };
    if let Err(e) = written {
        eprintln!("verify: {e}");
        return ExitCode::from(2);
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
