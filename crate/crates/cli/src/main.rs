use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use gravkerr::generators::Convention;
use gravkerr_cli::{load_config, run, CliError, Command, Overrides, Settings, Status};

/// Gravitational Kerr workbench: Fisher information, interferometer
/// statistics, cavity coupling and power budgets from declarative configs.
#[derive(Parser)]
#[command(version)]
struct Args {
    /// Computation to run.
    #[arg(value_enum)]
    command: Command,
    /// Config file (sectioned `key = value unit`).
    config: Option<PathBuf>,
    /// Use a shipped config instead of a file.
    #[arg(long)]
    preset: Option<String>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Truncation tolerance on discarded probability.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Prefactor convention of the interferometer generator.
    #[arg(long, value_parser = ["half", "unhalved"])]
    convention: Option<String>,
    /// Reserved; every computation is deterministic.
    #[arg(long)]
    seed: Option<u64>,
}

fn execute(args: &Args) -> Result<Status, CliError> {
    let (config, name) = load_config(args.config.as_deref(), args.preset.as_deref())?;
    let convention = match &args.convention {
        Some(c) => Some(c.parse::<Convention>().map_err(|e| CliError::Config(e.to_string()))?),
        None => None,
    };
    let overrides = Overrides {
        tolerance: args.tolerance,
        convention,
    };
    let settings = Settings::resolve(&config, &overrides, &name)?;
    let outcome = run(args.command, &config, &settings)?;
    for path in outcome.write(&args.out)? {
        println!("{}", path.display());
    }
    eprintln!("{}", outcome.summary);
    Ok(outcome.status)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let _ = args.seed;
    match execute(&args) {
        Ok(status) => {
            match &status {
                Status::Ok => {}
                Status::ToleranceFailure(m) => eprintln!("numerical tolerance failure: {m}"),
                Status::Infeasible(m) => eprintln!("infeasible: {m}"),
            }
            ExitCode::from(status.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
