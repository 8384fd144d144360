//! `gfl`: closed-form multiplicity formulas, random Gorenstein examples,
//! and end-to-end verification of the fiber tables they predict.
//!
//! Exit codes: 0 pass, 1 bad input or precondition, 2 mismatch or failed
//! certificate, 3 inconclusive under the resource budget.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use gfl_core::fiber::DEFAULT_ROW_CAP;
use gfl_core::groebner::Budget;
use gfl_core::polycore::Field;
use serde::Serialize;

use crate::manifest::{RunManifest, Timing, MANIFEST_SCHEMA};

#[derive(Parser, Debug, Serialize)]
#[command(name = "gfl", version, about = "Multiplicities of saturated special fiber rings, exactly")]
pub struct Cli {
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,

    /// Also write a run manifest that `gfl replay` can re-execute.
    #[arg(long, global = true, value_name = "PATH")]
    pub manifest: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Evaluate the closed forms.
    Formula {
        #[command(subcommand)]
        target: FormulaTarget,
    },
    /// Sample and certify a random height-three Gorenstein example.
    Generate(GenerateArgs),
    /// Measure image degree and fiber table of certified bundles.
    Verify(VerifyArgs),
    /// Check the hypotheses for a user-supplied alternating matrix.
    Certify(CertifyArgs),
    /// Groebner basis, dimension and degree of an ideal file.
    Ideal(IdealArgs),
    /// Re-run a manifest and compare its results payload.
    Replay(ReplayArgs),
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormulaTarget {
    /// Multiplicity e of the saturated special fiber ring.
    Mult(TripleArgs),
    /// j-multiplicity, e times (n-1)D/2.
    Jmult(TripleArgs),
    /// Betti number of the q-th symmetric power.
    Betti(BettiArgs),
    /// Ranks and twists of the complex resolving the q-th power.
    Shape(ShapeArgs),
    /// Hilbert polynomial of the saturated fiber, with the cancellation check.
    HilbertExpr(TripleArgs),
    /// Sweep a grid of (d, n, D) and cross-check every closed form.
    CheckIdentity(SweepArgs),
}

#[derive(Args, Debug, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct TripleArgs {
    #[arg(long, value_name = "d")]
    pub d: i64,
    #[arg(long, value_name = "n")]
    pub n: i64,
    #[arg(long = "D", value_name = "D")]
    pub big_d: i64,
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct BettiArgs {
    #[arg(long, value_name = "n")]
    pub n: i64,
    #[arg(long, value_name = "q")]
    pub q: i64,
    #[arg(long, value_name = "r")]
    pub r: i64,
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct ShapeArgs {
    #[arg(long, value_name = "n")]
    pub n: i64,
    #[arg(long = "D", value_name = "D")]
    pub big_d: i64,
    #[arg(long, value_name = "q")]
    pub q: i64,
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 6)]
    pub d_max: i64,
    #[arg(long, default_value_t = 13)]
    pub n_max: i64,
    #[arg(long = "D-max", value_name = "D_MAX", default_value_t = 3)]
    pub big_d_max: i64,
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Copy, Serialize)]
pub struct BudgetArgs {
    /// S-pairs allowed per Groebner basis.
    #[arg(long, value_name = "N", default_value_t = Budget::default().max_pairs)]
    pub pair_budget: usize,
    /// Terms allowed in any intermediate polynomial.
    #[arg(long, value_name = "N", default_value_t = Budget::default().max_terms)]
    pub size_budget: usize,
}

impl BudgetArgs {
    pub fn budget(&self) -> Budget {
        Budget {
            max_pairs: self.pair_budget,
            max_terms: self.size_budget,
        }
    }
}

#[derive(Args, Debug, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct GenerateArgs {
    #[arg(long, value_name = "d")]
    pub d: i64,
    #[arg(long, value_name = "n")]
    pub n: i64,
    #[arg(long = "D", value_name = "D")]
    pub big_d: i64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// QQ or Fp:<p>.
    #[arg(long, env = "GFL_DEFAULT_FIELD", default_value = "Fp:32003", value_parser = parse_field)]
    pub field: Field,
    /// Matrices to try before giving up (at least one).
    #[arg(long, default_value_t = 5)]
    pub retries: u64,
    /// Bundle path (standard output if absent).
    #[arg(short, long, value_name = "PATH")]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub budget: BudgetArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    /// One or more example bundles.
    #[arg(required = true, value_name = "BUNDLE")]
    pub bundles: Vec<PathBuf>,
    /// Largest power q in the fiber table.
    #[arg(long, default_value_t = 2)]
    pub q_max: u32,
    /// Largest number of products in a special fiber rank computation.
    #[arg(long, value_name = "N", default_value_t = DEFAULT_ROW_CAP)]
    pub row_cap: usize,
    /// Report path; several bundles give a JSON array.
    #[arg(short, long, value_name = "PATH")]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub budget: BudgetArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct CertifyArgs {
    /// Matrix file: {"vars": [...], "field": "...", "entries": [[...]]}.
    #[arg(long, value_name = "FILE")]
    pub matrix: PathBuf,
    #[arg(short, long, value_name = "PATH")]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub budget: BudgetArgs,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderArg {
    Grevlex,
    Lex,
}

#[derive(Args, Debug, Serialize)]
pub struct IdealArgs {
    /// Ideal file: {"vars": [...], "field": "...", "gens": [...]}.
    #[arg(long, value_name = "FILE")]
    pub ideal: PathBuf,
    #[arg(long, value_enum, default_value_t = OrderArg::Grevlex)]
    pub order: OrderArg,
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
    #[command(flatten)]
    pub budget: BudgetArgs,
}

#[derive(Args, Debug, Serialize)]
pub struct ReplayArgs {
    #[arg(value_name = "MANIFEST")]
    pub manifest: PathBuf,
}

fn parse_field(s: &str) -> Result<Field, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn write_file(path: &PathBuf, contents: &str) -> Result<()> {
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    if let Some(jobs) = cli.jobs {
        if let Err(err) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {err}");
            return ExitCode::from(1);
        }
    }

    let start = Instant::now();
    let outcome = match commands::run(&cli.command) {
        Ok(o) => o,
        Err(err) => {
            eprintln!("error: {err:#}");
            return ExitCode::from(1);
        }
    };
    let wall_ms = start.elapsed().as_millis();

    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    let written = outcome.files.iter().try_for_each(|(p, c)| write_file(p, c)).and_then(|()| {
        let Some(path) = &cli.manifest else { return Ok(()) };
        let m = RunManifest {
            schema: MANIFEST_SCHEMA.into(),
            command: commands::name(&cli.command),
            argv,
            parameters: serde_json::to_value(&cli.command)?,
            seeds: outcome.seeds.clone(),
            field: outcome.field.map(|f| f.to_string()),
            budgets: outcome.budget,
            version: env!("CARGO_PKG_VERSION").into(),
            timing: Timing { wall_ms },
            exit_code: outcome.code,
            results: outcome.results.clone(),
        };
        write_file(path, &(serde_json::to_string_pretty(&m)? + "\n"))
    });
    if let Err(err) = written {
        eprintln!("error: {err:#}");
        return ExitCode::from(1);
    }
    ExitCode::from(outcome.code)
}
