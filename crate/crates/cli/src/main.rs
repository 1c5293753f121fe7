use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use subriem::models::MODEL_NAMES;
use subriem_cli::checks::Check;
use subriem_cli::runner::{self, Settings, OUT_ENV};
use subriem_cli::{config, CliError, EXIT_FAIL, EXIT_PASS};

#[derive(Parser)]
#[command(name = "subriem", version, about = "Sub-Riemannian geodesics and the curvature of their projections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Tolerance for algebraic identities.
    #[arg(long, global = true)]
    tol_algebraic: Option<f64>,
    /// Tolerance for integrated or finite-difference quantities.
    #[arg(long, global = true)]
    tol_numeric: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory; overrides SUBRIEM_OUT and the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run every experiment section of a TOML config.
    Run {
        config: PathBuf,
    },
    /// Run all checks on a built-in model.
    Verify {
        model: String,
    },
    ListModels,
    ListChecks,
}

fn positive(name: &str, v: Option<f64>) -> Result<(), CliError> {
    match v {
        Some(t) if !(t > 0.0 && t.is_finite()) => Err(CliError::Input(format!("--{name} must be positive"))),
        _ => Ok(()),
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    positive("tol-algebraic", cli.tol_algebraic)?;
    positive("tol-numeric", cli.tol_numeric)?;
    let settings = Settings {
        tol_algebraic: cli.tol_algebraic,
        tol_numeric: cli.tol_numeric,
        seed: cli.seed,
        out: cli.out,
        env_out: std::env::var_os(OUT_ENV).filter(|v| !v.is_empty()).map(PathBuf::from),
    };
    let experiments = match cli.command {
        Command::ListModels => {
            for m in MODEL_NAMES {
                println!("{m}");
            }
            return Ok(EXIT_PASS);
        }
        Command::ListChecks => {
            for c in Check::ALL {
                println!("{:<24} {}", c.name(), c.description());
            }
            return Ok(EXIT_PASS);
        }
        Command::Run { config } => config::load(&config)?,
        Command::Verify { model } => vec![runner::verify_experiment(&model)?],
    };
    let mut all_pass = true;
    let stdout = std::io::stdout();
    for exp in &experiments {
        let outcome = runner::run_experiment(exp, &settings)?;
        all_pass &= outcome.pass();
        let mut lock = stdout.lock();
        let _ = runner::print_summary(&mut lock, &outcome);
        let _ = lock.flush();
    }
    Ok(if all_pass { EXIT_PASS } else { EXIT_FAIL })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
