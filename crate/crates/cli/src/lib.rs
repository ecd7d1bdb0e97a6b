//! Library half of the `countess` binary. Everything the commands do is
//! here so the pieces (manifest I/O, CSV shaping, heuristic wiring) stay
//! testable; `main` only parses argv and maps errors to exit codes.

pub mod eval;
pub mod gen;
pub mod manifest;
pub mod solve;
pub mod train;

use clap::{Parser, Subcommand};

pub const EXIT_SOLVED: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_ABORTED: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "countess", version, about = "Exact #SAT with learned branching")]
pub struct Cli {
    /// Worker threads for eval and training (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate benchmark instances plus a manifest.
    Gen(gen::GenArgs),
    /// Count the models of one DIMACS file.
    Solve(solve::SolveArgs),
    /// Train a branching policy with evolution strategies.
    Train(train::TrainArgs),
    /// Run an engine/heuristic matrix over a manifest split.
    Eval(eval::EvalArgs),
    /// Brute-force model count of a small DIMACS file.
    Oracle(solve::OracleArgs),
}

/// Runs a parsed invocation and returns the process exit code.
pub fn run(cli: Cli) -> anyhow::Result<i32> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()?;
    }
    match cli.command {
        Command::Gen(args) => gen::cmd_gen(&args),
        Command::Solve(args) => solve::cmd_solve(&args),
        Command::Train(args) => train::cmd_train(&args),
        Command::Eval(args) => eval::cmd_eval(&args),
        Command::Oracle(args) => solve::cmd_oracle(&args),
    }
}
