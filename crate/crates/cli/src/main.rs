use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use noether_cli::report::{write_report, Report};
use noether_cli::runner::{check_scenario, run_scenario, spectrum, RunOptions};
use noether_cli::scenario::Scenario;
use noether_core::DEFAULT_SEED;

/// Verify Noether symmetries and conservation laws of time-dependent
/// Hamiltonian systems, classically and on a quantum grid.
#[derive(Parser)]
#[command(name = "noether", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Symbolic symmetry verdicts only.
    Check {
        /// Built-in scenario name or path to a scenario file.
        scenario: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Full pipeline; writes report.json and CSV series to --out.
    Run {
        scenario: String,
        #[arg(long)]
        out: PathBuf,
        /// Replaces every drift tolerance.
        #[arg(long, env = "NOETHER_TOL")]
        tol: Option<f64>,
        /// Number of joint grid and step halvings to sweep.
        #[arg(long, default_value_t = 0)]
        refine: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Lowest stationary states of a time-independent scenario.
    Spectrum {
        scenario: String,
        #[arg(long, default_value_t = 4)]
        count: usize,
    },
    /// Lists the built-in scenarios.
    List,
}

fn load(source: &str) -> Result<Scenario, ExitCode> {
    Scenario::load(source).map_err(|e| {
        eprintln!("error: {e}");
        ExitCode::from(2)
    })
}

fn verdict(report: &Report) -> ExitCode {
    if report.passed {
        ExitCode::SUCCESS
    } else {
        for f in &report.failures {
            eprintln!("FAIL {f}");
        }
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Check { scenario, seed } => {
            let s = match load(&scenario) {
                Ok(s) => s,
                Err(code) => return code,
            };
            let report = check_scenario(
                &s,
                &RunOptions {
                    seed,
                    ..RunOptions::default()
                },
            );
            for e in &report.symbolic {
                let verdict = if e.is_symmetry {
                    "symmetry"
                } else {
                    "not a symmetry"
                };
                println!(
                    "{}: {verdict} (residual {:e}), T = {}",
                    e.label, e.residual.value, e.noether_function
                );
            }
            verdict(&report)
        }
        Command::Run {
            scenario,
            out,
            tol,
            refine,
            seed,
        } => {
            let s = match load(&scenario) {
                Ok(s) => s,
                Err(code) => return code,
            };
            let output = run_scenario(&s, &RunOptions { seed, tol, refine });
            if let Err(e) = write_report(
                &output.report,
                output.classical.as_ref(),
                output.quantum.as_ref(),
                &out,
            ) {
                eprintln!("error: writing {}: {e}", out.display());
                return ExitCode::from(2);
            }
            println!("{}", output.report.to_json());
            verdict(&output.report)
        }
        Command::Spectrum { scenario, count } => {
            let s = match load(&scenario) {
                Ok(s) => s,
                Err(code) => return code,
            };
            match spectrum(&s, count) {
                Ok(e) => {
                    for (n, v) in e.eigenvalues.iter().enumerate() {
                        println!("E{} = {v:.12}", n + 1);
                    }
                    let ok = e.max_imaginary.pass
                        && e.orthonormality.pass
                        && e.expected.iter().all(|n| n.check.pass);
                    if ok {
                        ExitCode::SUCCESS
                    } else {
                        eprintln!("FAIL {}", serde_json::to_string(&e).expect("serializable"));
                        ExitCode::from(1)
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
        Command::List => {
            for (name, _) in noether_cli::scenario::BUILTINS {
                println!("{name}");
            }
            ExitCode::SUCCESS
        }
    }
}
