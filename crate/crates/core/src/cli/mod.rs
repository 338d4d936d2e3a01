//! Command-line front end.
//!
//! Every command resolves its settings from flags, then from an optional
//! JSON run configuration whose fields take precedence, and produces a
//! document (JSON or CSV) plus a short summary table. With `--out` the
//! document goes to the file and the summary to stdout; without it the
//! document goes to stdout. Diagnostics go to stderr.
//!
//! Exit codes: 0 success, 1 a check failed, 2 invalid input, 3 I/O failure,
//! 4 degree overflow, 5 unmet precondition.

mod commands;
mod config;
mod suite;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::sheffer::PolynomialOnDual;
use crate::tensor::SymCoeff;
use crate::index::basis;

pub use config::{DegreeRange, LPrime, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "sheffer", version, about = "Sheffer sequences on truncated multivariate power series")]
pub struct Cli {
    /// Seed for every sampled quantity.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the document here and print only the summary.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// JSON run configuration; its fields override the flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    #[default]
    Operator,
    Embedding,
    Appell,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a family and write its sequence file.
    Family(FamilyArgs),
    /// Coefficients of a polynomial in the sequence basis.
    Expand(TransformArgs),
    /// Apply the umbral operator to a polynomial.
    Apply(TransformArgs),
    /// Apply then expand, on a given or on random polynomials.
    Roundtrip(RoundtripArgs),
    /// Operator, embedding or Appell growth bounds.
    Bounds(BoundsArgs),
    /// Ratio table of the umbral operator on powers of the first coordinate.
    Diverge(DivergeArgs),
    /// Block norms of the map and of its inverse.
    Probe(FamilyArgs),
    /// Full invariant suite on the catalog families.
    Check,
}

/// Family selection: a catalog kind with parameters, a spec file, or a sequence file.
#[derive(Clone, Debug, Default, Args)]
pub struct FamilyArgs {
    #[arg(long, visible_alias = "family", value_parser = parse_kind)]
    pub kind: Option<crate::families::FamilyKind>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub max_degree: Option<usize>,
    /// Laguerre parameter.
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<f64>,
    /// Comma-separated lifting weights.
    #[arg(long)]
    pub weights: Option<String>,
    /// Hermite covariance as a JSON matrix.
    #[arg(long)]
    pub cov: Option<String>,
    /// Named one-variable map for `custom`.
    #[arg(long)]
    pub a: Option<String>,
    /// `one` for `custom`.
    #[arg(long)]
    pub rho: Option<String>,
    /// Family spec JSON file.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Previously written sequence file.
    #[arg(long)]
    pub sequence: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct TransformArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Polynomial as a series JSON document.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct RoundtripArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Clone, Debug, Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, value_enum)]
    pub check: Option<BoundKind>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub l: Option<u32>,
    /// Denominator level, or `auto` for the smallest admissible one.
    #[arg(long)]
    pub l_prime: Option<LPrime>,
    /// Growth order for the Appell check, `alpha` by default.
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Clone, Debug, Args)]
pub struct DivergeArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Inclusive `start:end`.
    #[arg(long)]
    pub degrees: Option<DegreeRange>,
    /// Denominator level, or `auto` (Appell growth rule, 0 otherwise).
    #[arg(long)]
    pub l_prime: Option<LPrime>,
}

fn parse_kind(s: &str) -> Result<crate::families::FamilyKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Document and summary produced by a command.
pub struct Output {
    pub document: String,
    pub summary: String,
    /// `false` when the command ran a check that failed.
    pub pass: bool,
    pub out: Option<PathBuf>,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => 3,
        Error::DegreeOverflow { .. } => 4,
        Error::Precondition(_) | Error::BudgetExceeded { .. } => 5,
        _ => 2,
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(out) => match emit(&out) {
            Ok(()) if out.pass => 0,
            Ok(()) => 1,
            Err(e) => {
                eprintln!("error: {e}");
                exit_code(&e)
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn run(cli: &Cli) -> crate::Result<Output> {
    let config = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let settings = config::Settings::resolve(cli, &config)?;
    let output = match &cli.command {
        Command::Family(_) => commands::family(&settings),
        Command::Expand(_) => commands::transform(&settings, true),
        Command::Apply(_) => commands::transform(&settings, false),
        Command::Roundtrip(_) => commands::roundtrip(&settings),
        Command::Bounds(_) => commands::bounds(&settings),
        Command::Diverge(_) => commands::diverge(&settings),
        Command::Probe(_) => commands::probe(&settings),
        Command::Check => suite::check(&settings),
    }?;
    Ok(Output {
        out: settings.out.clone(),
        ..output
    })
}

fn emit(out: &Output) -> crate::Result<()> {
    match &out.out {
        Some(path) => {
            std::fs::write(path, &out.document)?;
            print!("{}", out.summary);
        }
        None => print!("{}", out.document),
    }
    Ok(())
}

/// Polynomial of degree `degree` with every coefficient uniform in the unit box of `C`.
pub fn random_polynomial<R: Rng>(dim: usize, degree: usize, rng: &mut R) -> PolynomialOnDual<Complex64> {
    let parts = (0..=degree)
        .map(|n| {
            let terms = basis(dim, n)
                .into_iter()
                .map(|m| (m, Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))));
            SymCoeff::from_terms(dim, n, terms).expect("basis monomials")
        })
        .collect();
    PolynomialOnDual::from_parts(dim, parts).expect("consistent parts")
}

#[cfg(test)]
mod tests;
