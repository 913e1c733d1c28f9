//! `transted`: parse statements, compare them by TED or TransTED, evaluate
//! a metric on an annotated benchmark and solve pseudometric instances.
//!
//! Exit codes: 0 success, 2 input or parse error, 3 I/O error, 4 invalid
//! search budget.

mod commands;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use error::CliError;

#[derive(Parser)]
#[command(name = "transted", version, about = "Similarity of formal theorem statements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the operator tree of a statement as JSON.
    Parse {
        /// Statement text, or a path with --from-file.
        statement: String,
        #[arg(long)]
        from_file: bool,
    },
    /// Tree edit distance and similarity between two statements.
    Ted {
        #[command(flatten)]
        pair: Pair,
        /// Also print an edit script as JSON.
        #[arg(long)]
        script: bool,
    },
    /// TransTED distance, similarity and rewrite trace.
    Transted {
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Score an annotated benchmark and report classification metrics.
    Eval(EvalArgs),
    /// Maximum pseudometric of a finite instance with a membership report.
    Oracle {
        /// Instance JSON: {"points", "bound", "constraints"}.
        instance: PathBuf,
    },
}

#[derive(Args)]
pub struct Pair {
    /// Reference statement, or a path with --from-file.
    pub first: String,
    /// Candidate statement, or a path with --from-file.
    pub second: String,
    #[arg(long)]
    pub from_file: bool,
}

#[derive(Args)]
pub struct SearchArgs {
    /// Maximum number of expanded search nodes.
    #[arg(long, default_value_t = 10_000)]
    pub max_nodes: usize,
    /// Maximum rewrite depth.
    #[arg(long, default_value_t = 30)]
    pub max_depth: usize,
    /// Optional wall-clock limit; results then depend on machine speed.
    #[arg(long)]
    pub max_seconds: Option<f64>,
    /// Rule library JSON; defaults to the shipped library.
    #[arg(long, env = "TRANSTED_RULES")]
    pub rules: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Metric {
    Ted,
    Transted,
    External,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum PolicyArg {
    Strict,
    #[value(name = "human_in_loop")]
    HumanInLoop,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
}

#[derive(Args)]
pub struct EvalArgs {
    /// Benchmark in JSON Lines form.
    pub benchmark: PathBuf,
    #[arg(long, value_enum, default_value = "transted")]
    pub metric: Metric,
    /// Precomputed scores for --metric external: JSON Lines {"id", "score"}.
    #[arg(long)]
    pub scores: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "strict")]
    pub policy: PolicyArg,
    /// Report every candidate threshold instead of a single one.
    #[arg(long)]
    pub sweep: bool,
    /// Decision threshold without --sweep: score >= threshold is True.
    #[arg(long, default_value_t = 1.0)]
    pub threshold: f64,
    /// Report path; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: FormatArg,
    /// Worker threads for scoring.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[command(flatten)]
    pub search: SearchArgs,
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Parse { statement, from_file } => commands::parse(&statement, from_file),
        Command::Ted { pair, script } => commands::ted(&pair, script),
        Command::Transted { pair, search } => commands::transted(&pair, &search),
        Command::Eval(args) => commands::eval(&args),
        Command::Oracle { instance } => commands::oracle(&instance),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
