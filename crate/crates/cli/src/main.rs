//! `flagdress` command-line interface.
//!
//! Exit codes: 0 when every checked property holds, 1 when one fails, 2 on
//! input or usage errors.

mod commands;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};

/// Largest ground set accepted without `--allow-large`.
pub const DEFAULT_MAX_N: usize = 6;

#[derive(Parser, Debug)]
#[command(name = "flagdress", version, about = "Exact checks on flags of tropical linear spaces")]
pub struct Cli {
    /// Instance, matrix, or record file (JSON).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 50)]
    pub trials: usize,
    /// `random-weights` or `realizable`.
    #[arg(long, global = true, default_value = "random-weights")]
    pub mode: String,
    /// Lift the ground-set size guard.
    #[arg(long, global = true)]
    pub allow_large: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Plücker relations per layer and incidence relations per pair.
    Check,
    /// Compare the induced subdivision's edges with the polytope's, and with the relations.
    Skeleton,
    /// Maximal cells of the induced subdivision with their functionals.
    Cells,
    /// Matroid analysis of every cell.
    Matroids,
    /// Tropicalize a matrix file into an instance.
    Realize,
    /// Generate an instance.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        q: usize,
    },
    /// Search cells for disagreement between "no internal edges" and
    /// "concordant". With `--input`, replays a counterexample record instead.
    Experiment {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        p: usize,
        #[arg(long, default_value_t = 3)]
        q: usize,
    },
    /// Print a built-in instance.
    Example { name: String },
}

/// Whether the checked property held.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

fn emit(cli: &Cli, text: &str) -> anyhow::Result<()> {
    match &cli.output {
        Some(path) => std::fs::write(path, format!("{text}\n")).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            writeln!(out, "{text}").context("writing to stdout")
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli).and_then(|(text, status)| emit(&cli, &text).map(|_| status)) {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(Status::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
