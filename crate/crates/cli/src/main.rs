//! `verify`: run scenario files and seeded suites, write reports and exit
//! with 0 (all pass), 1 (a check is violated) or 2 (configuration error).

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use warpcheck::scenario::{emit_tables, run_scenario, run_suite, to_csv, to_json, Family, OutputFormat, RunOverrides, RunReport};
use warpcheck::spectrum::OdeCoefficient;

/// Environment variable capping the number of worker threads.
const THREADS_VAR: &str = "VERIFY_THREADS";

#[derive(Debug, Parser)]
#[command(name = "verify", version, about = "Check comparison inequalities on warped products with boundary")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one scenario file.
    Run {
        /// Scenario JSON file.
        file: PathBuf,
        /// Seed for randomized instances.
        #[arg(long)]
        seed: Option<u64>,
        /// Directory for report.json (and margins.csv); stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "json")]
        format: OutputFormat,
        /// Verdict tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Sample points per check.
        #[arg(long)]
        grid: Option<usize>,
        /// Drift coefficient of the model eigenvalue ODE.
        #[arg(long = "ode-coeff")]
        ode_coeff: Option<OdeCoefficient>,
    },
    /// Run a seeded family of generated instances.
    Suite {
        family: Family,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "json")]
        format: OutputFormat,
    },
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_VAR) else { return Ok(()) };
    let n: usize = raw.trim().parse().map_err(|_| format!("{THREADS_VAR} must be a positive integer, got {raw:?}"))?;
    if n == 0 {
        return Err(format!("{THREADS_VAR} must be a positive integer, got {raw:?}"));
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

fn write_report(report: &RunReport, out: Option<&Path>, format: OutputFormat) -> Result<(), String> {
    match out {
        Some(dir) => {
            for path in emit_tables(report, dir, format).map_err(|e| e.to_string())? {
                eprintln!("wrote {}", path.display());
            }
            Ok(())
        }
        None => {
            let text = match format {
                OutputFormat::Json => to_json(report),
                OutputFormat::Csv => to_csv(report),
            };
            std::io::stdout().lock().write_all(text.as_bytes()).map_err(|e| format!("cannot write to stdout: {e}"))
        }
    }
}

fn print_summary(report: &RunReport, started: Instant) {
    eprintln!("{:<34} {:>5} {:>5} {:>5} {:>5} {:>5} {:>5}  worst margin", "check", "n", "eq", "holds", "viol", "skip", "err");
    for s in &report.summary {
        let worst = s.worst_margin.map(|m| format!("{m:.3e} ({})", s.worst_instance.as_deref().unwrap_or("-"))).unwrap_or_default();
        eprintln!(
            "{:<34} {:>5} {:>5} {:>5} {:>5} {:>5} {:>5}  {worst}",
            s.check_id, s.instances, s.equality, s.holds, s.violated, s.skipped, s.errors
        );
    }
    eprintln!("violated: {}, errors: {}, wall time: {:.2?}", report.violated, report.errors, started.elapsed());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    let started = Instant::now();
    let (report, out, format) = match cli.command {
        Command::Run { file, seed, out, format, tol, grid, ode_coeff } => {
            let overrides = RunOverrides { seed, tol, grid, ode_coeff };
            match run_scenario(&file, &overrides) {
                Ok(r) => (r, out, format),
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            }
        }
        Command::Suite { family, count, seed, out, format } => (run_suite(family, count, seed), out, format),
    };
    print_summary(&report, started);
    if let Err(e) = write_report(&report, out.as_deref(), format) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(report.exit_code() as u8)
}
