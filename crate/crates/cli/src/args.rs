use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use infolab::tables::Scale;

#[derive(Debug, Parser)]
#[command(
    name = "oracle-infolab",
    version,
    about = "Information-theoretic analysis of quantum oracle algorithms"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output format. With --out and no format, both are written.
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,

    /// Directory for report files; reports go to stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,

    /// Reduction width. Computation is sequential, so this only labels the report.
    #[arg(long, default_value_t = 1, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stage-by-stage quantities of a problem under its standard algorithm.
    Run {
        #[command(flatten)]
        problem: ProblemArgs,

        #[arg(long, value_enum, default_value_t = StageChoice::All)]
        stage: StageChoice,
    },
    /// Replicate the reference tables and report per-cell deviations.
    Tables {
        /// Table number; all five when absent.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=5))]
        which: Option<u8>,

        #[arg(long, value_parser = parse_scale, default_value = "desk")]
        scale: Scale,
    },
    /// Optimality certificate, minimized discord and best measurement basis
    /// for the post-query ensemble.
    Optimize {
        #[command(flatten)]
        problem: ProblemArgs,

        #[arg(long, default_value_t = 32)]
        restarts: usize,

        #[arg(long, default_value_t = 1e-7)]
        tol: f64,

        /// Also search pre-query states with this many random trials.
        #[arg(long)]
        search: Option<usize>,
    },
    /// Abelian hidden subgroup problem from subgroup structure alone.
    Hsp {
        /// Cycle orders of the group, e.g. `2,4`; every subgroup is a class.
        #[arg(
            long,
            value_delimiter = ',',
            conflicts_with = "n",
            required_unless_present = "n"
        )]
        group: Vec<usize>,

        /// Simon's problem on `n` bits instead of a full subgroup lattice.
        #[arg(long)]
        n: Option<usize>,

        /// Number of parallel queries.
        #[arg(long, default_value_t = 1)]
        t: usize,
    },
    /// Phase estimation with `n` bits of precision on `t` qubits.
    Phase {
        #[arg(long)]
        n: usize,

        #[arg(long)]
        t: usize,

        /// `final` uses the shift-symmetric evaluation; other stages simulate
        /// every class explicitly.
        #[arg(long, value_enum, default_value_t = StageChoice::Final)]
        stage: StageChoice,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProblemKind {
    Dj,
    Bv,
    Simon,
    Phase,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StageChoice {
    Pre,
    Post,
    Final,
    All,
}

#[derive(Debug, Clone, Args)]
pub struct ProblemArgs {
    #[arg(long, value_enum)]
    pub problem: ProblemKind,

    /// Deutsch-Jozsa input bits.
    #[arg(long)]
    pub k: Option<usize>,

    /// Input bits (Bernstein-Vazirani, Simon) or phase precision.
    #[arg(long)]
    pub n: Option<usize>,

    /// Parallel queries (Simon) or register qubits (phase).
    #[arg(long)]
    pub t: Option<usize>,

    /// Problem file for `--problem custom`.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

fn parse_scale(s: &str) -> Result<Scale, String> {
    s.parse().map_err(|e: infolab::Error| e.to_string())
}
