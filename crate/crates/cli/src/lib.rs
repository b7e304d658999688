//! `darbkit` command-line front end.
//!
//! [`run`] takes the full argument vector and returns the exit code with the
//! text destined for stdout and stderr, so the binary is a thin wrapper and
//! tests can drive every subcommand in-process.

mod commands;
mod input;
mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use output::{Report, Status};

/// Exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "darbkit", version, about = "Exact Darboux-integrability analysis of polynomial vector fields")]
struct Cli {
    /// Emit one JSON report on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check X(f) = k f and report the cofactor.
    VerifyDarboux {
        #[arg(long)]
        system: PathBuf,
        /// Polynomial expression, or the name of a `poly` declared in the system file.
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
    /// Search for Darboux polynomials up to a degree.
    SearchDarboux {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        degree: u32,
        /// Fixed polynomial cofactor.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "constant", required_unless_present = "constant")]
        cofactor: Option<String>,
        /// Search over all constant cofactors.
        #[arg(long)]
        constant: bool,
    },
    /// Synthesize a Darboux Jacobian multiplier from verified pairs.
    Multiplier {
        #[arg(long)]
        system: PathBuf,
        /// Lines `EXPR ; EXPR` (polynomial ; cofactor).
        #[arg(long)]
        pairs: PathBuf,
    },
    /// Darboux first integrals from cofactor relations.
    FirstIntegrals {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        pairs: PathBuf,
    },
    /// Check that w0 + sum c ln w is a first integral.
    VerifyIntegral {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        w0: String,
        /// `C:EXPR`, a rational constant and a rational function.
        #[arg(long = "log", required = true, allow_hyphen_values = true)]
        logs: Vec<String>,
    },
    /// Solve for all c making w0 + sum c ln w a first integral.
    SolveLogCoeffs {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        w0: String,
        #[arg(long = "w", required = true, allow_hyphen_values = true)]
        ws: Vec<String>,
    },
    /// Jacobian multiplier from n - 1 rational first integrals.
    Cramer {
        #[arg(long)]
        system: PathBuf,
        #[arg(long = "integral", required = true, allow_hyphen_values = true)]
        integrals: Vec<String>,
    },
    /// Constant-cofactor search, multiplier and first-integral synthesis.
    Report {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        degree: u32,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::VerifyDarboux { .. } => "verify-darboux",
            Command::SearchDarboux { .. } => "search-darboux",
            Command::Multiplier { .. } => "multiplier",
            Command::FirstIntegrals { .. } => "first-integrals",
            Command::VerifyIntegral { .. } => "verify-integral",
            Command::SolveLogCoeffs { .. } => "solve-log-coeffs",
            Command::Cramer { .. } => "cramer",
            Command::Report { .. } => "report",
        }
    }
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invocation {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs one command line; `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> Invocation
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let json = argv.iter().skip(1).any(|a| a == "--json");
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Invocation { code: EXIT_OK, stdout: text, stderr: String::new() };
            }
            let command = argv.get(1).filter(|a| !a.starts_with('-')).cloned().unwrap_or_default();
            let summary = text
                .lines()
                .take_while(|l| !l.trim().is_empty())
                .map(str::trim)
                .collect::<Vec<_>>()
                .join(" ");
            let summary = summary.trim_start_matches("error: ").to_string();
            let report = Report::error(&command, "", EXIT_USAGE, vec![summary]);
            return if json {
                report.into_invocation(true)
            } else {
                Invocation { code: EXIT_USAGE, stdout: String::new(), stderr: text }
            };
        }
    };
    let name = cli.command.name();
    commands::execute(name, cli.command, cli.seed).into_invocation(cli.json)
}
