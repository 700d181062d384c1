//! `argrank`: rank, blame and check assumption-based knowledge bases.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 invalid knowledge base,
//! 3 postulate violation, 4 no convergence.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use argrank::abf::NodePolicy;
use argrank::culpability::Measure;
use argrank::sequent::{AttackRuleSet, Filters};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "argrank", version, about = "Ranking-based semantics for assumption-based argumentation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Args)]
struct Iteration {
    /// Stop when no score moves by this much.
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, default_value_t = argrank::gradual::DEFAULT_MAX_ITER)]
    max_iter: usize,
}

#[derive(Subcommand)]
enum Command {
    /// List maximal consistent subsets, minimal inconsistent subsets and
    /// free assumptions.
    Analyze {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Rank the nodes of the attack diagram with the categoriser.
    Rank {
        file: PathBuf,
        /// powerset or singletons-top
        #[arg(long, default_value = "powerset")]
        policy: NodePolicy,
        #[command(flatten)]
        iteration: Iteration,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
        /// Write the attack diagram as a DOT digraph.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Culpability of each assumption.
    Culp {
        file: PathBuf,
        /// d, star, c or induced
        #[arg(long, default_value = "c")]
        measure: Measure,
        #[arg(long, default_value = "powerset")]
        policy: NodePolicy,
        #[command(flatten)]
        iteration: Iteration,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Check ranking postulates on a file or on random knowledge bases.
    /// The categoriser runs with --eps 1e-12 unless told otherwise, so
    /// comparisons at 1e-9 see converged scores.
    Check {
        #[arg(required_unless_present = "random", conflicts_with = "random")]
        file: Option<PathBuf>,
        #[arg(long)]
        random: bool,
        #[arg(long, default_value_t = 42, requires = "random")]
        seed: u64,
        #[arg(long, default_value_t = 200, requires = "random")]
        count: usize,
        /// all, or a single postulate such as monotony or blame
        #[arg(long, default_value = "all")]
        postulate: String,
        #[arg(long, default_value = "powerset")]
        policy: NodePolicy,
        /// Check these scores instead of computing them. The file holds
        /// `{"scores": {"<node id>": <real>, ...}}`, ids as in `rank --format json`.
        #[arg(long, conflicts_with = "random")]
        ranking: Option<PathBuf>,
        #[command(flatten)]
        iteration: Iteration,
    },
    /// Build and rank a framework of support/conclusion arguments.
    Sequent {
        file: PathBuf,
        /// Comma-separated: def, dirdef, ucut, canucut, dirucut, or all.
        #[arg(long, default_value = "all")]
        rules: AttackRuleSet,
        /// Comma-separated: consistent-only, minimal-only.
        #[arg(long, default_value = "")]
        filters: Filters,
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Also check freeness, dominance, blame, consistency and equal
        /// scores for equal supports (--eps defaults to 1e-12 here).
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        iteration: Iteration,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            if let Some(message) = failure.message() {
                eprintln!("error: {message}");
            }
            ExitCode::from(failure.code())
        }
    }
}
