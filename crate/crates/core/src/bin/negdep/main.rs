mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use negdep::Error;

#[derive(Parser, Debug)]
#[command(
    name = "negdep",
    version,
    about = "Negatively dependent sampling schemes and exact pair-dependence analysis"
)]
struct Cli {
    /// Worker threads for enumeration and replications (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate one randomized point set.
    Generate(GenerateArgs),
    /// Exact dependence analyses.
    #[command(subcommand)]
    Analyze(Analyze),
    /// Replicated variance comparison against Monte Carlo.
    Variance(VarianceArgs),
    /// Run the full reproduction suite, one pass/fail line per criterion.
    ReproducePaper(ReproduceArgs),
}

#[derive(Args, Debug, Clone)]
struct SchemeArgs {
    #[arg(long, value_enum)]
    scheme: SchemeName,
    #[arg(long)]
    n: u64,
    #[arg(long, default_value_t = 1)]
    dim: usize,
    /// Fixed generator: residues `1,2` or fractions `1/5,2/5` (rsj only).
    #[arg(long)]
    generator: Option<String>,
    /// grid, torus or none (rsj; patterson accepts torus).
    #[arg(long)]
    shift: Option<String>,
    /// on or off (rsj only).
    #[arg(long)]
    jitter: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum SchemeName {
    Stratified,
    Lhs,
    Patterson,
    Rsj,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Analyze {
    /// Exact P(p1 in Q, p2 in R) and P(p1 in Q) P(p2 in R).
    Pairprob {
        #[command(flatten)]
        scheme: SchemeArgs,
        /// Anchor of Q = [x, 1): comma list, or one value for every coordinate.
        #[arg(long = "Q", alias = "q")]
        q: String,
        #[arg(long = "R", alias = "r")]
        r: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify pairwise negative dependence on the corner grid (1/M) Z^d.
    Nuod {
        #[command(flatten)]
        scheme: SchemeArgs,
        /// Grid resolution M (default 2N).
        #[arg(long)]
        grid: Option<u64>,
        /// Also write one CSV row per probed box pair.
        #[arg(long)]
        pairs_csv: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the lattice cell-pair law with LHS.
    Copula {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        generator: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that the coordinate pairs are iid.
    Independence {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        generator: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count lattice and LHS configurations through two given cells.
    Triple {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        dim: usize,
        /// Cell indices or multiples of 1/N, comma separated.
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact quantities for the ablated lattices.
    #[command(subcommand)]
    Ablation(Ablation),
}

#[derive(Subcommand, Debug)]
enum Ablation {
    /// P(p1 in [0, 1/N)^d) without the random shift.
    NoShift {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// P(p1 in Q | p2 in R) for a torus-shifted fixed-distance scheme.
    Conditional {
        /// rsj or patterson; the shift is forced to torus and jitter off.
        #[arg(long, value_enum, default_value_t = SchemeName::Rsj)]
        scheme: SchemeName,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long)]
        epsilon: String,
        /// Coordinate carrying the boxes (default: last).
        #[arg(long)]
        coord: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct VarianceArgs {
    /// Batch config; replaces the inline flags.
    #[arg(long, conflicts_with_all = ["scheme", "integrand"])]
    config: Option<PathBuf>,
    #[arg(long, value_enum, requires = "n")]
    scheme: Option<SchemeName>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long, default_value_t = 1)]
    dim: usize,
    #[arg(long)]
    generator: Option<String>,
    #[arg(long)]
    shift: Option<String>,
    #[arg(long)]
    jitter: Option<String>,
    /// Integrand `name[:param]`; repeatable.
    #[arg(long)]
    integrand: Vec<String>,
    #[arg(long, default_value_t = 10_000)]
    replications: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// CSV table; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON array of results.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ReproduceArgs {
    /// Only these criteria, comma separated.
    #[arg(long, value_delimiter = ',')]
    only: Vec<u8>,
    #[arg(long)]
    seed: Option<u64>,
    /// JSON report of the outcomes.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// What a command found, mapped to the exit code.
enum Outcome {
    Clean,
    Violation,
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::BudgetExceeded { .. } => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: cannot set up {t} threads: {e}");
            return ExitCode::from(2);
        }
    }
    match commands::run(cli.command) {
        Ok(Outcome::Clean) => ExitCode::SUCCESS,
        Ok(Outcome::Violation) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
