//! Command-line front end for `schottky-scale`.
//!
//! Every report starts with the tool version and the configuration that
//! produced it. Integers of unbounded size are written as decimal strings.
//! Exit codes: 0 on success, 1 when a verification reports a failed check,
//! 2 on usage or input errors.

mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

pub use report::Report;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Parser, Serialize)]
#[command(
    name = "scalevol",
    version,
    about = "Scales and scale volumes of Schottky lattices on trees"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Output format: structured document or tab-separated text.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub jobs: Option<usize>,

    /// Largest rank accepted by rank-wide commands.
    #[arg(long, default_value_t = schottky_scale::enumerate::DEFAULT_RANK_CEILING, global = true)]
    pub rank_ceiling: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Rose,
    Bs,
    Cycle,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RankArg {
    #[arg(long)]
    pub rank: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GraphArg {
    /// Graph file: `v N` / `e A B` lines, or a JSON record when the name ends in `.json`.
    #[arg(long)]
    pub graph: PathBuf,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum Command {
    /// One representative per isomorphism class of the given rank.
    Enumerate {
        #[command(flatten)]
        #[serde(flatten)]
        rank: RankArg,
        /// Write one graph file per class and a certificate into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Schottky basis elements of spanning trees.
    Basis {
        #[command(flatten)]
        #[serde(flatten)]
        graph: GraphArg,
        #[arg(long, default_value_t = 0, conflicts_with = "all_trees")]
        tree: usize,
        #[arg(long)]
        all_trees: bool,
    },
    /// Stable dart coloring and continuation profiles.
    Colors {
        #[command(flatten)]
        #[serde(flatten)]
        graph: GraphArg,
    },
    /// Scales of basis elements of one spanning tree.
    Scale {
        #[command(flatten)]
        #[serde(flatten)]
        graph: GraphArg,
        #[arg(long, default_value_t = 0)]
        tree: usize,
        /// Only this element (by position in the basis).
        #[arg(long, conflicts_with = "all")]
        element: Option<usize>,
        /// Every element of the basis (the default).
        #[arg(long)]
        all: bool,
        /// Cross-check each scale by path counting over this many periods.
        #[arg(long)]
        oracle: Option<usize>,
        #[arg(long, default_value_t = schottky_scale::scale::DEFAULT_ORACLE_PERIOD_BUDGET)]
        oracle_budget: usize,
    },
    /// Schottky scale volumes over the whole rank.
    Svol {
        #[command(flatten)]
        #[serde(flatten)]
        rank: RankArg,
    },
    /// Primes dividing scales of basis elements over the whole rank.
    Primes {
        #[command(flatten)]
        #[serde(flatten)]
        rank: RankArg,
    },
    /// Checks the explicit families against their predicted extremes.
    Verify {
        #[command(flatten)]
        #[serde(flatten)]
        rank: RankArg,
    },
    /// Writes a graph of one of the explicit families.
    Build {
        #[arg(long, value_enum)]
        family: Family,
        #[command(flatten)]
        #[serde(flatten)]
        rank: RankArg,
        /// Scale of the loop generator, for `bs`.
        #[arg(long, required_if_eq("family", "bs"))]
        s: Option<usize>,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] schottky_scale::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error("writing output: {0}")]
    Output(#[from] std::io::Error),
}

/// How a completed run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    VerificationFailed,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::VerificationFailed => 1,
        }
    }
}

/// Exit code for errors that stop a run.
pub const USAGE_EXIT: i32 = 2;

/// Executes `config`, writing the main report to `out`.
pub fn run(config: &RunConfig, out: &mut dyn Write) -> Result<Status, CliError> {
    let execute = || -> Result<(String, Status), CliError> {
        let (report, status) = commands::execute(config)?;
        Ok((report.render(config)?, status))
    };
    let (text, status) = match config.jobs {
        Some(0) => return Err(CliError::Usage("--jobs must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(e.to_string()))?
            .install(execute)?,
        None => execute()?,
    };
    out.write_all(text.as_bytes())?;
    Ok(status)
}
