//! The `lr` command-line tool: a JSON presentation format for algebras, Lie
//! structures, modules and morphisms, and commands that validate, compute and
//! verify them with exact arithmetic.
//!
//! Exit codes: 0 when every check passes, 1 when some check fails, 2 on input
//! or usage errors.

pub mod commands;
pub mod element;
pub mod error;
pub mod format;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use lr_core::adjoints::Variant;

use crate::commands::{ComputeWhat, RunOptions, VerifyWhat};
use crate::error::{CliError, CliResult};
use crate::output::{Outcome, OutputFormat};

pub const DEGREE_ENV: &str = "LR_DEFAULT_DEGREE";
const DEFAULT_DEGREE: u32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "lr",
    version,
    about = "Exact computations with Lie–Rinehart algebras and their enveloping rings"
)]
pub struct Cli {
    /// Output format for reports and computed structures.
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: OutputFormat,
    /// Output file (compute) or directory (fixtures).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Filtered degree cutoff; defaults to $LR_DEFAULT_DEGREE, then 3.
    #[arg(long, global = true)]
    pub degree: Option<u32>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Number of random trials per randomized check.
    #[arg(long, global = true, default_value_t = 100)]
    pub trials: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the built-in fixture corpus to --out DIR.
    Fixtures,
    /// Run the axiom validators for each file's kind.
    Validate {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Compute a derived structure and print its basis and structure constants.
    Compute {
        #[arg(value_enum)]
        what: ComputeWhat,
        files: Vec<PathBuf>,
        /// Carrier variant for `adjoint`: anchored, lie_rinehart or enveloping_base.
        #[arg(long, default_value = "lie_rinehart", value_parser = parse_variant)]
        variant: Variant,
    },
    /// Check a theorem-level property on the given inputs.
    Verify {
        #[arg(value_enum)]
        what: VerifyWhat,
        files: Vec<PathBuf>,
        /// Extra naturality squares for `adjunction`: morphism files into L.
        #[arg(long = "square")]
        squares: Vec<PathBuf>,
    },
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse().map_err(|e: lr_core::Error| e.to_string())
}

/// What a run printed and how it ended.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Execution {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn degree(explicit: Option<u32>, env: &dyn Fn(&str) -> Option<String>) -> CliResult<u32> {
    if let Some(d) = explicit {
        return Ok(d);
    }
    match env(DEGREE_ENV) {
        None => Ok(DEFAULT_DEGREE),
        Some(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{DEGREE_ENV} must be a non-negative integer, got {v:?}"))),
    }
}

fn run(cli: &Cli, env: &dyn Fn(&str) -> Option<String>) -> CliResult<Outcome> {
    let opts = RunOptions {
        degree: degree(cli.degree, env)?,
        seed: cli.seed,
        trials: cli.trials,
    };
    match &cli.command {
        Command::Fixtures => {
            let dir = cli
                .out
                .as_deref()
                .ok_or_else(|| CliError::Usage("fixtures needs --out DIR".into()))?;
            commands::write_fixtures(dir)
        }
        Command::Validate { files } => commands::validate(files),
        Command::Compute { what, files, variant } => commands::compute(*what, files, *variant, cli.out.as_deref()),
        Command::Verify { what, files, squares } => commands::verify(*what, files, squares, opts),
    }
}

/// Runs the tool on `args` (including the program name), reading environment
/// variables through `env`.
pub fn execute<I, T>(args: I, env: impl Fn(&str) -> Option<String>) -> Execution
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Execution {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Execution {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match run(&cli, &env) {
        Ok(outcome) => Execution {
            code: if outcome.passed() { 0 } else { 1 },
            stdout: outcome.render(cli.format),
            stderr: String::new(),
        },
        Err(e) => Execution {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}
