use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dpg_cli::checks::{run_all_checks, run_oracle_comparisons, CheckOptions};
use dpg_cli::config::ExperimentConfig;
use dpg_cli::runner;

/// Double-phase problems on truncated lattice graphs.
#[derive(Parser)]
#[command(name = "dpg", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML config file.
    Run {
        config: PathBuf,
        /// Print the normalized config instead of running.
        #[arg(long)]
        normalize: bool,
    },
    /// Run all property suites; one JSON report per line.
    Check {
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Compare the solver against the brute-force oracle on small instances.
    Oracle {
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, normalize } => {
            let (parsed, base) = match ExperimentConfig::load(&config) {
                Ok(v) => v,
                Err(e) => {
                    eprintln!("invalid config {}: {}", config.display(), e);
                    return ExitCode::from(2);
                }
            };
            if normalize {
                print!("{}", parsed.normalized());
                return ExitCode::SUCCESS;
            }
            match runner::run(&parsed, &base) {
                Ok(outcome) => {
                    println!("report: {}", outcome.report_path.display());
                    if outcome.all_converged {
                        ExitCode::SUCCESS
                    } else {
                        eprintln!("warning: some runs did not converge");
                        ExitCode::from(1)
                    }
                }
                Err(e) => {
                    eprintln!("run failed: {:#}", e);
                    ExitCode::from(1)
                }
            }
        }
        Command::Check { samples, seed } => {
            let reports = match run_all_checks(&CheckOptions { samples, seed }) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("check failed to run: {:#}", e);
                    return ExitCode::from(1);
                }
            };
            let mut clean = true;
            for report in &reports {
                println!("{}", serde_json::to_string(report).expect("serializable"));
                clean &= report.passed();
            }
            if clean {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Command::Oracle { tol } => {
            let rows = match run_oracle_comparisons(tol) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("oracle comparison failed: {:#}", e);
                    return ExitCode::from(1);
                }
            };
            let mut clean = true;
            for row in &rows {
                println!("{}", serde_json::to_string(row).expect("serializable"));
                clean &= row.pass;
            }
            if clean {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
