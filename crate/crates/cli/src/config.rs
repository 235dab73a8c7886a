use std::path::PathBuf;
use std::time::Duration;

use bramsey::bigraph::GraphEncoding;
use bramsey::search::SearchOptions;
use clap::{Parser, Subcommand, ValueEnum};

/// Environment variable overriding the default per-search timeout (seconds).
pub const TIMEOUT_ENV: &str = "BRAMSEY_TIMEOUT";

#[derive(Parser, Debug)]
#[command(
    name = "bramsey",
    version,
    about = "Bipartite Ramsey numbers of even cycles"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Per-search time budget in seconds.
    #[arg(long, global = true, env = TIMEOUT_ENV, default_value_t = 300.0)]
    pub timeout: f64,

    /// Search worker threads.
    #[arg(long, global = true, default_value_t = 1)]
    pub workers: usize,

    /// Return the first counterexample in search order, independent of --workers.
    #[arg(long, global = true)]
    pub deterministic: bool,

    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Also write the JSON result to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Pretty)]
    pub format: OutputFormat,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Build a lower-bound coloring and check both colors for the target cycles.
    VerifyConstruction {
        /// Registered construction name (figure1, theorem4).
        #[arg(long)]
        kind: String,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Does every 2-coloring of K_{b,b} contain a red C_2m or a blue C_2n?
    Decide {
        #[arg(long)]
        b: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// Registered decider (exhaustive, brute).
        #[arg(long, default_value = "exhaustive")]
        strategy: String,
        /// Always search, even when a known construction settles the query.
        #[arg(long)]
        no_seed: bool,
    },
    /// Smallest b <= max-b for which `decide` holds.
    ComputeBr {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        max_b: usize,
    },
    /// Status of BR(C8, C2n) for 2 <= n <= max-n.
    Table {
        #[arg(long)]
        max_n: usize,
        /// Largest board on which an upper bound is searched.
        #[arg(long, default_value_t = 6)]
        search_up_to: usize,
    },
    /// Look for a cycle of length 2k in a graph JSON file.
    CheckCycle {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        /// Registered cycle finder (dfs, oracle).
        #[arg(long, default_value = "dfs")]
        detector: String,
    },
    /// Random supergraphs of K_{3,4} in K_{8,8}: each must have a C8 in one color.
    Prop1Sweep {
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
    },
    /// List registered strategies.
    List,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    /// Human-readable summary.
    Pretty,
    /// Indented JSON with edge lists.
    Json,
    /// Single-line JSON with hex rows.
    Compact,
}

impl OutputFormat {
    pub fn encoding(self) -> GraphEncoding {
        match self {
            OutputFormat::Compact => GraphEncoding::RowsHex,
            _ => GraphEncoding::Edges,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub timeout: Duration,
    pub workers: usize,
    pub deterministic: bool,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl TryFrom<Cli> for RunConfig {
    type Error = String;

    fn try_from(cli: Cli) -> Result<Self, String> {
        if !(cli.timeout.is_finite() && cli.timeout > 0.0) {
            return Err(format!("--timeout must be positive, got {}", cli.timeout));
        }
        if cli.workers == 0 {
            return Err("--workers must be at least 1".into());
        }
        Ok(RunConfig {
            command: cli.command,
            timeout: Duration::from_secs_f64(cli.timeout),
            workers: cli.workers,
            deterministic: cli.deterministic,
            seed: cli.seed,
            out: cli.out,
            format: cli.format,
        })
    }
}

impl RunConfig {
    pub fn search_options(&self) -> SearchOptions {
        SearchOptions {
            budget: self.timeout,
            workers: self.workers,
            deterministic: self.deterministic,
            ..Default::default()
        }
    }
}
