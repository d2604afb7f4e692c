//! `ncorder`: evaluate operator expressions, apply orderings, verify the
//! ordering theorem on words and generate BCH / Magnus expansions.
//!
//! Exit status: 0 on success, 1 when a verification or property fails, 2 on
//! usage, parse or input errors.

mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "ncorder", version, about = "Operator orderings, BCH and Magnus expansions over exact rationals")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed for every random draw.
    #[arg(long, global = true, env = "NCORDER_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Matrix dimension for numeric checks.
    #[arg(long, global = true, default_value_t = 4)]
    pub dim: usize,
    /// Spectral-norm scale of random matrices.
    #[arg(long, global = true, default_value_t = 0.05)]
    pub scale: f64,
    /// Relative Frobenius tolerance for numeric comparisons.
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub tol: f64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate an expression to its canonical polynomial.
    Eval(EvalArgs),
    /// Apply an ordering rule to an expression.
    Order(OrderArgs),
    /// Ordering-theorem tools.
    #[command(subcommand)]
    Got(GotCommand),
    /// Baker-Campbell-Hausdorff expansion of exp(X) exp(Y).
    Bch(BchArgs),
    /// Discrete-time Magnus expansion of exp(A@m) ... exp(A@1).
    Magnus(MagnusArgs),
    /// Numeric truncation-order check of the BCH exponent.
    Numeric(NumericArgs),
    /// Run the randomized property suite.
    Suite(SuiteArgs),
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[arg(long)]
    pub expr: String,
    /// Comma-separated list of allowed symbols; others are rejected.
    #[arg(long, value_delimiter = ',')]
    pub symbols: Vec<String>,
}

#[derive(Args, Debug)]
pub struct OrderArgs {
    /// time | antitime | alpha | nxy:X,Y | perm:k1,k2,... | weyl
    #[arg(long)]
    pub rule: String,
    #[arg(long)]
    pub expr: String,
}

#[derive(Subcommand, Debug)]
pub enum GotCommand {
    /// Check O[prod phi] = O'[prod phi'] on a word.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Ordering of the input generators.
    #[arg(long)]
    pub o: String,
    /// Ordering the result is expressed in.
    #[arg(long)]
    pub oprime: String,
    /// Comma-separated labels; plain numbers n stand for generator xn.
    #[arg(long)]
    pub word: String,
    /// JSON decomposition {"A": {"1": "2/3", ...}, ...}.
    #[arg(long = "L", value_name = "FILE")]
    pub l: Option<std::path::PathBuf>,
    /// Also compare both sides in a random matrix representation.
    #[arg(long)]
    pub numeric: bool,
}

#[derive(Args, Debug)]
pub struct BchArgs {
    #[arg(long, default_value_t = 3)]
    pub max_order: usize,
    /// got | log | classical
    #[arg(long, default_value = "got")]
    pub method: String,
    /// Skip the oracle comparisons.
    #[arg(long)]
    pub no_verdict: bool,
}

#[derive(Args, Debug)]
pub struct MagnusArgs {
    #[arg(long, default_value_t = 2)]
    pub steps: usize,
    #[arg(long, default_value_t = 3)]
    pub max_order: usize,
    /// got | log
    #[arg(long, default_value = "got")]
    pub method: String,
    /// Skip the oracle comparisons.
    #[arg(long)]
    pub no_verdict: bool,
}

#[derive(Args, Debug)]
pub struct NumericArgs {
    /// Truncation degree of the exponent.
    #[arg(long, default_value_t = 6)]
    pub max_order: usize,
}

#[derive(Args, Debug)]
pub struct SuiteArgs {
    #[arg(long, default_value_t = 100)]
    pub cases: usize,
    /// Run only the named property.
    #[arg(long)]
    pub property: Option<String>,
    #[arg(long, hide = true, value_enum)]
    pub mutant: Option<Mutant>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mutant {
    NegateContraction,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            let rendered = match cli.format {
                Format::Text => out.text,
                Format::Json => serde_json::to_string_pretty(&out.json).expect("json values serialize") + "\n",
            };
            // a closed pipe (e.g. `| head`) is not an error
            let _ = std::io::stdout().lock().write_all(rendered.as_bytes());
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
