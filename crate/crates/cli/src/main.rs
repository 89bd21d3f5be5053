//! `halfspace` — profiles, extinction certificates and symmetry experiments
//! for `−Δu = u^(−γ)` on the half-space.
//!
//! Exit codes: 0 success, 2 nonexistence regime (γ ≤ 1), 3 numerical
//! failure, 64 usage error, 1 anything else (I/O).

use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod output;

use commands::{
    ClassifyArgs, ExplicitArgs, ExtinctionArgs, KelvinArgs, Pde2dArgs, ProfileArgs, SweepArgs,
    VerifyArgs,
};

#[derive(Parser)]
#[command(
    name = "halfspace",
    version,
    about = "Positive solutions of −Δu = u^(−γ) on the half-space"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report whether positive solutions exist for γ
    Classify(ClassifyArgs),
    /// Power-branch profile A·t^(2/(γ+1)) as CSV
    Explicit(ExplicitArgs),
    /// Profile of one family member as CSV, with a quality report
    Profile(ProfileArgs),
    /// Extinction certificate for an initial state
    Extinction(ExtinctionArgs),
    /// Recompute residual and energy drift of a profile CSV
    Verify(VerifyArgs),
    /// Half-strip symmetry experiment
    Pde2d(Pde2dArgs),
    /// Sampled check of the Kelvin-transformed equation
    Kelvin(KelvinArgs),
    /// Tabulate coefficients, extinction times and decay rates across γ
    Sweep(SweepArgs),
}

pub const EXIT_NONEXISTENCE: u8 = 2;
pub const EXIT_NUMERIC: u8 = 3;
pub const EXIT_USAGE: u8 = 64;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Classify(a) => commands::classify(a),
        Command::Explicit(a) => commands::explicit(a),
        Command::Profile(a) => commands::profile(a),
        Command::Extinction(a) => commands::extinction(a),
        Command::Verify(a) => commands::verify(a),
        Command::Pde2d(a) => commands::pde2d(a),
        Command::Kelvin(a) => commands::kelvin(a),
        Command::Sweep(a) => commands::sweep(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &anyhow::Error) -> u8 {
    use halfspace::Error;
    match e.downcast_ref::<Error>() {
        Some(Error::Regime(_)) => EXIT_NONEXISTENCE,
        Some(Error::Numerics { .. } | Error::Step(_) | Error::NonConvergence { .. }) => {
            EXIT_NUMERIC
        }
        Some(Error::Domain(_) | Error::Spec(_)) => EXIT_USAGE,
        None => 1,
    }
}
