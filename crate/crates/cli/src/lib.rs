//! Command-line front end for the composite apportionment library.
//!
//! The binary is a thin shell: argument structs live here so the commands
//! can be driven from tests without spawning a process, and every command
//! returns a rendered string or a [`CliError`] that `main` prints as a single
//! `error: ...` line.

use std::fs::File;
use std::path::PathBuf;

use camcom_core::data;
use camcom_core::divisor::RoundingRule;
use camcom_core::model::{load_roster, Roster};
use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub mod columns;
mod commands;
pub mod report;

pub use columns::{ColumnSpec, ReportSpec};
pub use commands::{apportion, solve, table};
pub use report::{Format, Report};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read roster {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("roster {path}: {source}")]
    Roster {
        path: String,
        source: camcom_core::Error,
    },
    #[error("{0}")]
    Method(String),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// 2 for bad invocations, 1 for everything the data or methods reject.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

/// Method errors with roster indices replaced by state codes.
pub(crate) fn method_error(err: camcom_core::Error, roster: &Roster) -> CliError {
    use camcom_core::Error;
    let code = |i: usize| {
        roster
            .states()
            .get(i)
            .map_or_else(|| format!("#{i}"), |s| s.code.clone())
    };
    let msg = match err {
        Error::Tie { states } => format!(
            "apportionment tie at the last awarded seat between {}",
            states.into_iter().map(code).collect::<Vec<_>>().join(", ")
        ),
        Error::AmbiguousTransfer { exponent, pairs } => format!(
            "ambiguous seat transfer at exponent {exponent}: pairs {} tie",
            pairs
                .into_iter()
                .map(|(i, j)| format!("{}/{}", code(i), code(j)))
                .collect::<Vec<_>>()
                .join(", ")
        ),
        other => other.to_string(),
    };
    CliError::Method(msg)
}

#[derive(Debug, Parser)]
#[command(
    name = "camcom",
    version,
    about = "Composite seat apportionment with base seats, divisor rounding and a cap"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Composite apportionment at one exponent.
    Apportion(ApportionArgs),
    /// Exponents that give the largest state exactly the cap.
    Solve(SolveArgs),
    /// Several compositions side by side.
    Table(TableArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Builtin {
    /// The 27 EU member states with populations of 1.1.2011.
    Eu27,
}

#[derive(Debug, Clone, Args)]
pub struct Input {
    /// Roster CSV with the header `code,name,population`.
    #[arg(
        long,
        value_name = "PATH",
        conflicts_with = "builtin",
        required_unless_present = "builtin"
    )]
    pub roster: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub builtin: Option<Builtin>,
}

impl Input {
    pub fn builtin(which: Builtin) -> Self {
        Input {
            roster: None,
            builtin: Some(which),
        }
    }

    pub fn load(&self) -> Result<Roster, CliError> {
        match (&self.builtin, &self.roster) {
            (Some(Builtin::Eu27), _) => Ok(data::eu27()),
            (None, Some(path)) => {
                let shown = path.display().to_string();
                let file = File::open(path).map_err(|source| CliError::Read {
                    path: shown.clone(),
                    source,
                })?;
                load_roster(file).map_err(|source| CliError::Roster {
                    path: shown,
                    source,
                })
            }
            (None, None) => Err(CliError::Usage(
                "one of --roster or --builtin is required".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Decimal places for exponents and divisors.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u8).range(1..=17))]
    pub precision: u8,
}

impl Default for Output {
    fn default() -> Self {
        Output {
            format: Format::Text,
            precision: 4,
        }
    }
}

fn parse_rule(s: &str) -> Result<RoundingRule, String> {
    s.parse::<RoundingRule>().map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct ApportionArgs {
    #[command(flatten)]
    pub input: Input,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub exponent: f64,
    #[arg(long, default_value_t = 751)]
    pub house: u32,
    #[arg(long, default_value_t = 5)]
    pub base: u32,
    /// Cap on any state's seats; no capping step without it.
    #[arg(long)]
    pub cap: Option<u32>,
    /// Rounding rule: up, std or down.
    #[arg(long, default_value = "up", value_parser = parse_rule)]
    pub rule: RoundingRule,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Pick {
    #[default]
    All,
    /// The smallest exponent, closest to the status quo.
    Smallest,
    /// The largest exponent, closest to the capped composite.
    Largest,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub input: Input,
    #[arg(long, default_value_t = 751)]
    pub house: u32,
    #[arg(long, default_value_t = 5)]
    pub base: u32,
    #[arg(long, default_value_t = 96)]
    pub cap: u32,
    #[arg(long, value_enum, default_value_t = Pick::All)]
    pub pick: Pick,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Args)]
pub struct TableArgs {
    #[command(flatten)]
    pub input: Input,
    /// Comma-separated columns: camcom, solve, statusquo, parabolic,
    /// power:E, composite:E, index:E. Defaults to the five-way EU27
    /// comparison.
    #[arg(long, value_delimiter = ',')]
    pub columns: Vec<ColumnSpec>,
    #[arg(long, default_value_t = 751)]
    pub house: u32,
    #[arg(long, default_value_t = 5)]
    pub base: u32,
    #[arg(long, default_value_t = 96)]
    pub cap: u32,
    /// Rounding rule for composite:E columns.
    #[arg(long, default_value = "up", value_parser = parse_rule)]
    pub rule: RoundingRule,
    #[command(flatten)]
    pub output: Output,
}

/// Runs one parsed command line and returns its rendered output.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let (report, format) = match &cli.command {
        Command::Apportion(a) => (apportion(a)?, a.output.format),
        Command::Solve(s) => (solve(s)?, s.output.format),
        Command::Table(t) => (table(t)?, t.output.format),
    };
    Ok(report.render(format))
}

/// Collapses a message onto one line for the diagnostic contract.
pub fn single_line(msg: &str) -> String {
    msg.split_whitespace().collect::<Vec<_>>().join(" ")
}
