use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use coex::commands::{self, Outcome};
use coex::json::{self, Tolerances};
use coex_core::oracle::OracleConfig;
use coex_core::witness::DEFAULT_MAX_GROUND;
use serde_json::Value;

/// Witness mappings and coexistence certificates for interval effect algebras.
///
/// Exit status: 0 pass, 1 mathematical failure, 2 input error, 3 resource cap.
#[derive(Parser)]
#[command(name = "coex", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct TolArgs {
    /// Eigenvalue cutoff and equality tolerance for Hermitian effects
    #[arg(long, default_value_t = coex_core::groups::DEFAULT_PSD_TOLERANCE)]
    psd_tol: f64,
    /// Tolerance for pairwise commutation of Hermitian effects
    #[arg(long, default_value_t = coex_core::canonical::DEFAULT_COMMUTE_TOLERANCE)]
    commute_tol: f64,
    /// Hermiticity tolerance when reading matrices
    #[arg(long, default_value_t = json::DEFAULT_EQ_TOLERANCE)]
    eq_tol: f64,
}

impl TolArgs {
    fn get(self) -> Tolerances {
        Tolerances { psd: self.psd_tol, eq: self.eq_tol, commute: self.commute_tol }
    }
}

#[derive(Args)]
struct AlgebraArgs {
    /// Bundled algebra name (see `coex fixtures`)
    #[arg(long, conflicts_with = "algebra")]
    fixture: Option<String>,
    /// Algebra document {"group": ..., "unit": ...}
    #[arg(long)]
    algebra: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the witness axioms of a β-document
    Verify {
        file: PathBuf,
        #[arg(long)]
        max_ground: Option<usize>,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Build and check the coexistence certificate of a β-document
    Certify {
        file: PathBuf,
        #[arg(long)]
        max_ground: Option<usize>,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Compare brute-force witness search with brute-force coexistence on every small subset
    Oracle {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long, default_value_t = 3)]
        max_ground: usize,
        /// Cap on decomposition length (default: the carrier's natural bound)
        #[arg(long)]
        max_parts: Option<usize>,
        #[arg(long, default_value_t = OracleConfig::default().node_budget)]
        node_budget: u64,
    },
    /// Find witness elements c for a pair (a, b), given as JSON
    Pair {
        #[command(flatten)]
        algebra: AlgebraArgs,
        a: String,
        b: String,
        /// JSON array of candidate witnesses (Hermitian carriers)
        #[arg(long)]
        candidates: Option<String>,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Product witness of commuting Hermitian effects, from {"algebra", "ground"}
    Product {
        file: PathBuf,
        #[arg(long)]
        max_ground: Option<usize>,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Meet witness of a subset of an MV-effect algebra, as a β-document
    Meet {
        #[command(flatten)]
        algebra: AlgebraArgs,
        /// JSON array of effects
        set: String,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// List bundled algebras, or print one as an algebra document
    Fixtures { name: Option<String> },
}

fn read_json(path: &Path) -> Result<Value, Outcome> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Outcome::input_error(format!("cannot read {}: {e}", path.display())))?;
    parse_json(&text)
}

fn parse_json(text: &str) -> Result<Value, Outcome> {
    serde_json::from_str(text).map_err(|e| Outcome::from(json::InputError::from(e)))
}

fn witness_cap(flag: Option<usize>) -> Result<usize, Outcome> {
    let env = std::env::var(coex::MAX_GROUND_ENV).ok();
    Ok(coex::max_ground(flag, env.as_deref(), DEFAULT_MAX_GROUND)?)
}

fn algebra(args: &AlgebraArgs, tol: &Tolerances) -> Result<coex_core::effects::IntervalEffectAlgebra, Outcome> {
    let doc = args.algebra.as_deref().map(read_json).transpose()?;
    commands::resolve_algebra(args.fixture.as_deref(), doc.as_ref(), tol)
}

fn run(cli: Cli) -> Result<Outcome, Outcome> {
    match cli.command {
        Command::Verify { file, max_ground, tol } => commands::verify(&read_json(&file)?, &tol.get(), witness_cap(max_ground)?),
        Command::Certify { file, max_ground, tol } => {
            commands::certify(&read_json(&file)?, &tol.get(), witness_cap(max_ground)?)
        }
        Command::Oracle { algebra: args, max_ground, max_parts, node_budget } => {
            let alg = algebra(&args, &Tolerances::default())?;
            let cfg = OracleConfig { max_parts, max_ground, node_budget, prune: true };
            commands::oracle(&alg, &cfg)
        }
        Command::Pair { algebra: args, a, b, candidates, tol } => {
            let tol = tol.get();
            let alg = algebra(&args, &tol)?;
            let candidates = candidates.as_deref().map(parse_json).transpose()?;
            commands::pair(&alg, &parse_json(&a)?, &parse_json(&b)?, candidates.as_ref(), &tol)
        }
        Command::Product { file, max_ground, tol } => {
            commands::product(&read_json(&file)?, &tol.get(), witness_cap(max_ground)?)
        }
        Command::Meet { algebra: args, set, tol } => {
            let tol = tol.get();
            let alg = algebra(&args, &tol)?;
            commands::meet(&alg, &parse_json(&set)?, &tol)
        }
        Command::Fixtures { name: None } => Ok(commands::fixture_list()),
        Command::Fixtures { name: Some(name) } => commands::fixture(&name),
    }
}

fn main() -> ExitCode {
    let outcome = run(Cli::parse()).unwrap_or_else(|e| e);
    print!("{}", json::to_string(&outcome.report));
    if let Some(msg) = outcome.report.get("error").and_then(|e| e.get("message")).and_then(Value::as_str) {
        eprintln!("coex: {msg}");
    }
    ExitCode::from(outcome.exit as u8)
}
