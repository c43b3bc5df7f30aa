//! weylchar: exact-arithmetic CLI over the core library. Exit codes:
//! 0 ok, 2 usage, 3 data validation, 4 mathematical assertion failure.

mod commands;
mod render;
mod schema;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use weylchar_core::charformula::CharError;
use weylchar_core::coxeter::CoxeterError;
use weylchar_core::fourier::FourierError;
use weylchar_core::groups::GroupError;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Math(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Data(m) => write!(f, "data error: {m}"),
            CliError::Math(m) => write!(f, "assertion failure: {m}"),
        }
    }
}

impl From<CoxeterError> for CliError {
    fn from(e: CoxeterError) -> CliError {
        CliError::Data(e.to_string())
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> CliError {
        CliError::Data(e.to_string())
    }
}

impl From<FourierError> for CliError {
    fn from(e: FourierError) -> CliError {
        CliError::Data(e.to_string())
    }
}

impl From<CharError> for CliError {
    fn from(e: CharError) -> CliError {
        match e {
            CharError::IntegralityViolation { .. } | CharError::VerificationFailed(_) => {
                CliError::Math(e.to_string())
            }
            other => CliError::Data(other.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Parser)]
#[command(name = "weylchar", version, about = "Exact combinatorics of extended affine Weyl groups: finite-order classes, character tables, the nonabelian Fourier transform, and class-function verification")]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Write output to a file instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Conjugator search bound for class enumeration
    #[arg(long = "search-length", global = true, default_value_t = 12)]
    search_length: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect an affine datum
    Datum {
        #[command(subcommand)]
        action: DatumAction,
    },
    /// Enumerate finite-order conjugacy classes with elliptic anchors
    Classes {
        /// Builtin datum name or datum file
        #[arg(long)]
        datum: String,
    },
    /// Character table of a finite group file
    Chartable {
        #[arg(long)]
        group: PathBuf,
    },
    /// Nonabelian Fourier transform matrix on M(Gamma)
    Fourier {
        #[arg(long)]
        group: PathBuf,
    },
    /// Values of tau_A on all finite-order classes
    Tau {
        /// Builtin datum name or datum file (defaults to the rep's datum)
        #[arg(long)]
        datum: Option<String>,
        #[arg(long)]
        rep: PathBuf,
    },
    /// Values of phi_V assembled through the Fourier pairing
    Phi {
        /// Group file for Gamma
        #[arg(long)]
        gamma: PathBuf,
        /// Assignment file giving M' and its representations
        #[arg(long)]
        assignment: PathBuf,
        /// Pair in M(Gamma), e.g. "(1,eps)" or "0,1"
        #[arg(long)]
        v: String,
    },
    /// Parahoric vanishing test for phi_V on type-J classes
    Vanishing {
        #[arg(long)]
        datum: String,
        /// Comma-separated node set, e.g. "1,2" (empty or "none" for {})
        #[arg(long = "J")]
        j: String,
        #[arg(long = "H")]
        h: String,
    },
    /// Multiplicity pairing (E : R_w) through family data
    Multiplicity {
        /// Family file
        #[arg(long)]
        family: PathBuf,
        /// Comma-separated irreducible indices of W_H
        #[arg(long = "E")]
        e: String,
        /// Word in the simple reflections of H, e.g. "1,2" ("e" for identity)
        #[arg(long)]
        w: String,
    },
    /// Verify the rank-2 coefficient table against the computed Fourier matrix
    VerifyG2 {
        /// Group file for Gamma (defaults to the embedded order-6 group)
        #[arg(long)]
        group: Option<PathBuf>,
        /// Expected-coefficient file (defaults to the embedded table)
        #[arg(long)]
        rows: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum DatumAction {
    /// Print nodes, bonds, |Omega| and the Omega node action
    Show {
        /// Builtin datum name or datum file
        what: String,
    },
}

fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Datum {
            action: DatumAction::Show { what },
        } => commands::datum_show(what, cli.format),
        Command::Classes { datum } => commands::classes(datum, cli.search_length, cli.format),
        Command::Chartable { group } => commands::chartable(group, cli.format),
        Command::Fourier { group } => commands::fourier(group, cli.format),
        Command::Tau { datum, rep } => {
            commands::tau_cmd(datum.as_deref(), rep, cli.search_length, cli.format)
        }
        Command::Phi {
            gamma,
            assignment,
            v,
        } => commands::phi(gamma, assignment, v, cli.search_length, cli.format),
        Command::Vanishing { datum, j, h } => commands::vanishing(datum, j, h, cli.format),
        Command::Multiplicity { family, e, w } => {
            commands::multiplicity(family, e, w, cli.format)
        }
        Command::VerifyG2 { group, rows } => {
            commands::verify_g2_cmd(group.as_deref(), rows.as_deref(), cli.format)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if let Some(path) = &cli.output {
                if let Err(e) = std::fs::write(path, &out) {
                    eprintln!("data error: {}: {e}", path.display());
                    return ExitCode::from(3);
                }
            } else {
                print!("{out}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{e}");
            match e {
                CliError::Usage(_) => ExitCode::from(2),
                CliError::Data(_) => ExitCode::from(3),
                CliError::Math(_) => ExitCode::from(4),
            }
        }
    }
}
