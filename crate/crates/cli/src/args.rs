use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ltlf_muc::SplitMode;

#[derive(Debug, Parser)]
#[command(name = "ltlf-muc", version, about = "Minimal unsatisfiable cores of LTLf specifications")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stream every minimal unsatisfiable core
    Enumerate(EngineArgs),
    /// Stop at the first minimal unsatisfiable core
    Single(EngineArgs),
    /// Certified cores among the MUSes of one fixed-depth probe
    Kbounded {
        #[command(flatten)]
        engine: EngineArgs,
        #[arg(long)]
        k: usize,
    },
    /// Minimum model length of the whole specification, 0 if unsatisfiable
    Sat {
        #[command(flatten)]
        input: InputArgs,
        /// Also print a shortest model
        #[arg(long)]
        witness: bool,
        #[command(flatten)]
        budgets: BudgetArgs,
    },
    /// Write the depth-k probe as an ASP program
    ExportAsp {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        k: usize,
    },
    /// Run `enumerate` on every file of a directory and print one CSV row each
    Bench(BenchArgs),
    /// Random conjunction instance, one conjunct per line
    Gen(GenArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Split {
    Root,
    Recursive,
}

impl From<Split> for SplitMode {
    fn from(s: Split) -> Self {
        match s {
            Split::Root => SplitMode::Root,
            Split::Recursive => SplitMode::Recursive,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Formula file, or `-` for standard input
    pub input: PathBuf,
    /// How the formula is cut into conjuncts
    #[arg(long, value_enum, default_value_t = Split::Recursive)]
    pub split: Split,
    /// Read one conjunct per line instead of splitting a single formula
    #[arg(long)]
    pub conjuncts_file: bool,
}

#[derive(Debug, Clone, Args)]
pub struct BudgetArgs {
    /// Wall-clock limit in seconds
    #[arg(long, value_parser = positive_seconds)]
    pub timeout: Option<f64>,
    /// States the satisfiability check may visit per call
    #[arg(long, env = "LTLF_MUC_MAX_STATES")]
    pub max_states: Option<usize>,
    /// Variables a probe may allocate
    #[arg(long, env = "LTLF_MUC_MAX_VARS")]
    pub max_vars: Option<usize>,
    /// Propagations per probe query
    #[arg(long, env = "LTLF_MUC_MAX_PROPAGATIONS")]
    pub max_propagations: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct EngineArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub budgets: BudgetArgs,
    /// Give up instead of deepening past this probe depth
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_k: Option<u64>,
    /// Generate and certify candidates on one thread
    #[arg(long)]
    pub deterministic: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    pub dir: PathBuf,
    #[arg(long, value_enum, default_value_t = Split::Recursive)]
    pub split: Split,
    #[arg(long)]
    pub conjuncts_file: bool,
    /// Per-instance limit in seconds
    #[arg(long, value_parser = positive_seconds, default_value_t = 60.0)]
    pub timeout: f64,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Write each instance's JSON-lines event log here
    #[arg(long)]
    pub events_dir: Option<PathBuf>,
    /// Write `instance,t_ms,n_mucs` rows for plotting here
    #[arg(long)]
    pub series: Option<PathBuf>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_k: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[arg(long, default_value_t = 20)]
    pub conjuncts: usize,
    #[arg(long, default_value_t = 5)]
    pub atoms: usize,
    /// Maximum operator nesting per conjunct
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn positive_seconds(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err("must be a positive number of seconds".into())
    }
}
