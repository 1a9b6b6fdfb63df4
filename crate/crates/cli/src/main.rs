mod cache;
mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use toricsyz_core::koszul::DEFAULT_STRAND_LIMIT;

#[derive(Parser, Debug)]
#[command(name = "toricsyz", version, about = "Exact syzygy computations for projective toric embeddings")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Worker threads for strand ranks (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Result cache directory; overrides the TORICSYZ_CACHE_DIR variable.
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,

    /// Ignore any configured cache.
    #[arg(long, global = true)]
    no_cache: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Lattice points of dP.
    Count(CountArgs),
    /// Ehrhart polynomial as exact fractions.
    Ehrhart(PolyArgs),
    /// Integer roots of the Ehrhart polynomial and r(P).
    Roots(PolyArgs),
    /// Normality check with a witness on failure.
    Normality(NormalityArgs),
    /// Graded Betti table of the section ring of L^c.
    Betti(BettiArgs),
    /// (N_p) verdicts for L^c.
    Np(NpArgs),
    /// Cohomology dimensions of L^d, or of O(a) on a product of projective spaces.
    Cohomology(CohomologyArgs),
    /// Castelnuovo-Mumford regularity check.
    Regularity(RegularityArgs),
    /// Predict (N_p) from a weight sequence.
    Predict(PredictArgs),
    /// Evaluate every applicable sufficient criterion.
    Criteria(CriteriaArgs),
    /// Write a reproducible random corpus of polytope files.
    Corpus(CorpusArgs),
    /// Markdown regression report.
    Report(ReportArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct PolyArgs {
    /// Polytope file: {"vertices": [[int, ...], ...]}.
    #[serde(skip)]
    pub polytope: PathBuf,
}

#[derive(Args, Debug, Serialize)]
pub struct CountArgs {
    #[command(flatten)]
    pub poly: PolyArgs,
    /// Dilation factor.
    #[arg(long, default_value_t = 1)]
    pub d: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct NormalityArgs {
    #[command(flatten)]
    pub poly: PolyArgs,
    /// Largest m checked (default max(dim - 1, 2)).
    #[arg(long)]
    pub mmax: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
pub struct KoszulArgs {
    /// Use the section ring of L^c.
    #[arg(long, default_value_t = 1)]
    pub c: usize,
    /// Largest j - i in the window (default dim P + 2).
    #[arg(long)]
    pub max_slope: Option<usize>,
    /// Recompute every rank with exact integer arithmetic and compare.
    #[arg(long)]
    pub certify: bool,
    /// Refuse strands with more basis elements than this.
    #[arg(long, default_value_t = DEFAULT_STRAND_LIMIT)]
    pub strand_limit: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct BettiArgs {
    #[command(flatten)]
    pub poly: PolyArgs,
    #[command(flatten)]
    pub koszul: KoszulArgs,
    /// Largest homological degree (default dim V, the full table).
    #[arg(long)]
    pub max_i: Option<usize>,
}

#[derive(Args, Debug, Serialize)]
pub struct NpArgs {
    #[command(flatten)]
    pub poly: PolyArgs,
    #[command(flatten)]
    pub koszul: KoszulArgs,
    #[arg(long, default_value_t = 1)]
    pub pmax: usize,
    /// Mark verdicts guaranteed by a criterion as PROVEN; a computed failure
    /// contradicting a criterion exits with status 4.
    #[arg(long)]
    pub with_criteria: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct ProductArgs {
    /// Factor dimensions n_1,...,n_l of a product of projective spaces.
    #[arg(long, value_delimiter = ',')]
    pub product: Option<Vec<usize>>,
}

#[derive(Args, Debug, Serialize)]
pub struct CohomologyArgs {
    /// Polytope file (omit with --product).
    #[serde(skip)]
    pub polytope: Option<PathBuf>,
    #[command(flatten)]
    pub product: ProductArgs,
    /// Twist d of L^d, or a_1,...,a_l on a product.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub twist: Vec<i64>,
}

#[derive(Args, Debug, Serialize)]
pub struct RegularityArgs {
    #[serde(skip)]
    pub polytope: Option<PathBuf>,
    #[command(flatten)]
    pub product: ProductArgs,
    /// Twist m of L^m, or m_1,...,m_l on a product.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub twist: Vec<i64>,
}

#[derive(Args, Debug, Serialize)]
pub struct PredictArgs {
    #[serde(skip)]
    pub polytope: Option<PathBuf>,
    #[command(flatten)]
    pub product: ProductArgs,
    /// Weight vectors w_1;w_2;... with comma-separated coordinates, e.g. "2;1".
    /// The last vector is repeated up to p.
    #[arg(long)]
    pub weights: String,
    #[arg(long)]
    pub p: usize,
    /// Also compute (N_p) at the predicted twist (polytope case).
    #[arg(long)]
    pub check: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct CriteriaArgs {
    #[serde(skip)]
    pub polytope: Option<PathBuf>,
    #[command(flatten)]
    pub product: ProductArgs,
    /// Power d of L (polytope case).
    #[arg(long)]
    pub d: Option<usize>,
    /// Degrees d_1,...,d_l (product case).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub degrees: Option<Vec<i64>>,
    #[arg(long)]
    pub p: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct CorpusArgs {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, default_value_t = 4)]
    pub bound: u64,
    /// Output directory.
    #[serde(skip)]
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug, Serialize)]
pub struct ReportArgs {
    #[arg(long, value_enum, default_value_t = ExampleSet::Paper)]
    pub examples: ExampleSet,
}

#[derive(Copy, Clone, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExampleSet {
    Paper,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(2);
        }
    };
    let cache_dir = if cli.no_cache {
        None
    } else {
        cache::resolve_dir(cli.cache_dir.as_deref())
    };
    match pool.install(|| commands::run(&cli.command, cli.format, cache_dir.as_deref())) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
