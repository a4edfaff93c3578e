//! `tiadc`: interleaved-ADC mismatch analysis from the command line.
//!
//! Exit codes: 0 success, 1 validation error, 2 numerical non-convergence.

mod commands;
mod config;
mod error;
mod mismatch_file;
mod output;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "tiadc",
    version,
    about = "Spur, replica, and calibration-step analysis for time-interleaved ADCs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form spur/replica table for a concrete device
    Predict(commands::PredictArgs),
    /// Time-domain capture with spectrum export and prediction comparison
    Simulate(commands::SimulateArgs),
    /// Closed-form spur-power CDF table
    Cdf(commands::CdfArgs),
    /// Empirical uniform-vs-Gaussian bin-power CCDF comparison
    #[command(name = "ccdf-compare")]
    CcdfCompare(commands::CcdfArgs),
    /// Calibration step size meeting a spur target at a production yield
    Yield(commands::YieldArgs),
    /// Step size versus target curve
    Sweep(commands::SweepArgs),
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version are not failures; everything else is a
            // validation error (exit 1, never 2).
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    let result = match cli.command {
        Command::Predict(args) => commands::run_predict(args),
        Command::Simulate(args) => commands::run_simulate(args),
        Command::Cdf(args) => commands::run_cdf(args),
        Command::CcdfCompare(args) => commands::run_ccdf_compare(args),
        Command::Yield(args) => commands::run_yield(args),
        Command::Sweep(args) => commands::run_sweep(args),
    };
    if let Err(err) = result {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
