mod commands;
mod failure;
mod files;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::bench::{cmd_bench, BenchArgs};
use commands::export::{cmd_export, ExportArgs};
use commands::gen::{cmd_gen, GenArgs};
use commands::solve::{cmd_solve, SolveArgs};
use commands::verify::{cmd_verify, VerifyArgs};

/// Grade-of-service Steiner tree solvers.
///
/// Exit status: 0 success, 1 verification failed, 2 bad input, 3 internal
/// invariant breach, 4 instance beyond an exact solver's size cap.
#[derive(Debug, Parser)]
#[command(name = "vgsst", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve instance files and write solution JSON.
    Solve(SolveArgs),
    /// Write a built-in or random instance.
    Gen(GenArgs),
    /// Render an instance as Graphviz DOT or as an LP model.
    Export(ExportArgs),
    /// Check a solution file against its instance.
    Verify(VerifyArgs),
    /// Time the solvers on seeded random instances.
    Bench(BenchArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Export(args) => cmd_export(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Bench(args) => cmd_bench(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            // solve reports its own per-file errors before returning
            if !matches!(cli.command, Command::Solve(_)) {
                eprintln!("error: {failure}");
            }
            failure.kind.exit_code()
        }
    }
}
