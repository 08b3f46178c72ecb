//! `hyperdet`: command-line front end for the hyperdet-core library.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperdet_core::config::{DEFAULT_BUDGET_TERMS, DEFAULT_DEGREE_CEILING};
use hyperdet_core::verify::DEFAULT_SEED;

mod commands;

#[derive(Parser, Debug)]
#[command(
    name = "hyperdet",
    version,
    about = "Exact λ-determinants, λ-hyperdeterminants and Macdonald functions at t = q^m"
)]
struct Cli {
    /// Largest number of summands a single sum may visit.
    #[arg(long, global = true, env = "HYPERDET_BUDGET", default_value_t = DEFAULT_BUDGET_TERMS, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,

    /// Largest partition weight the Macdonald engine will build.
    #[arg(long, global = true, env = "HYPERDET_DEGREE_CEILING", default_value_t = DEFAULT_DEGREE_CEILING, value_parser = positive)]
    degree_ceiling: usize,

    /// Directory for the Macdonald cache files.
    #[arg(long, global = true, env = "HYPERDET_CACHE_DIR", default_value = ".hyperdet-cache")]
    cache_dir: PathBuf,

    /// Keep Macdonald functions in memory only.
    #[arg(long, global = true)]
    no_cache: bool,

    #[command(subcommand)]
    command: Command,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Alternating sign matrices.
    Asm {
        #[command(subcommand)]
        action: AsmAction,
    },
    /// λ-determinant of a square matrix read from JSON.
    Det(DetArgs),
    /// Cayley or λ-hyperdeterminant of a hypermatrix read from JSON.
    Hyperdet(HyperdetArgs),
    /// Macdonald P or Q at t = q^m, or a basis change of a stored symmetric function.
    Macdonald(MacdonaldArgs),
    /// Coefficient of (z_1 ... z_s)^k in the q-Dyson product F G.
    Dyson(DysonArgs),
    /// Run identity checks.
    Verify(VerifyArgs),
    /// Inspect or reset the Macdonald cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand, Debug)]
enum AsmAction {
    /// |Alt_n| from the product formula, or by enumeration with --enumerate.
    Count {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        enumerate: bool,
        #[arg(long)]
        json: bool,
    },
    /// Every ASM of side n with i(X), n(X) and the generalized permutation.
    List {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        json: bool,
    },
    /// Distributions of i(X) and n(X) over Alt_n, or over ASMs read with --input.
    Stats {
        #[arg(long, required_unless_present = "input")]
        n: Option<usize>,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
struct DetArgs {
    /// `sym` for a symbolic λ, otherwise a rational function of q such as `2` or `-1/3`.
    #[arg(long, default_value = "sym", allow_hyphen_values = true)]
    lambda: String,
    /// Matrix JSON: {"n": 3, "entries": [["a11", ...], ...]}.
    #[arg(long, visible_alias = "input")]
    matrix: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Cayley,
    Lambda,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ConventionArg {
    Paper,
    Proof,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ConventionChoice {
    Both,
    Paper,
    Proof,
}

#[derive(Args, Debug)]
struct HyperdetArgs {
    #[arg(long, value_enum, default_value_t = Mode::Lambda)]
    mode: Mode,
    #[arg(long, value_enum, default_value_t = ConventionArg::Proof)]
    convention: ConventionArg,
    /// `sym` for a symbolic λ, otherwise a rational function of q.
    #[arg(long, default_value = "sym", allow_hyphen_values = true)]
    lambda: String,
    /// Hypermatrix JSON: {"n": 2, "dim": 4, "entries": [{"index": [1,1,1,1], "value": "3/2"}, ...]}.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    P,
    Q,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum BasisArg {
    P,
    M,
}

#[derive(Args, Debug)]
struct MacdonaldArgs {
    /// Comma-separated parts, e.g. `2,2`.
    #[arg(long, required_unless_present = "input")]
    partition: Option<String>,
    #[arg(long, value_parser = positive, required_unless_present = "input")]
    m: Option<usize>,
    #[arg(long, value_enum, default_value_t = Kind::Q)]
    kind: Kind,
    #[arg(long, value_enum, default_value_t = BasisArg::P)]
    basis: BasisArg,
    /// Re-read a symmetric function previously printed with --json.
    #[arg(long, conflicts_with_all = ["partition", "m"])]
    input: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct DysonArgs {
    #[arg(long)]
    k: usize,
    #[arg(long, value_parser = positive)]
    s: usize,
    #[arg(long, value_parser = positive)]
    m: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// `all` or an identity name.
    #[arg(default_value = "all")]
    identity: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    s: Option<usize>,
    #[arg(long, value_parser = positive)]
    m: Option<usize>,
    #[arg(long, value_enum, default_value_t = ConventionChoice::Both)]
    convention: ConventionChoice,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Random hypermatrices per case in the λ → 1 check.
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand, Debug)]
enum CacheAction {
    /// List cached partitions per m.
    Stat {
        #[arg(long)]
        json: bool,
    },
    /// Delete every cache file.
    Clear,
    /// Print cache files as JSON.
    Export {
        /// Print only the file for this m.
        #[arg(long)]
        m: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
