//! `rgk`: validate, inspect and verify ribbon graph documents from the shell.
//!
//! Exit codes: 0 success, 1 invalid input, 2 failed verification, 3 I/O error.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;

mod commands;

#[derive(Parser)]
#[command(name = "rgk", version, about = "Ribbon graphs, constructible sheaves and their mirrors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Output {
    /// Print JSON instead of a table.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and check a graph document.
    Validate { path: PathBuf },
    /// Boundary components, genus, zero section and dualizability.
    Invariants {
        path: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Shape and indices of a dualizable chordal graph.
    Dualizable {
        path: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Graphviz rendering with half-edges as ordered ports.
    ExportDot { path: PathBuf },
    /// The quiver of a conic Lagrangian, or one of its representations.
    Quiver {
        path: PathBuf,
        /// Print a representation instead: `constant`, `projective:V` or `simple:V`.
        #[arg(long)]
        rep: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Hom and Ext¹ between two representations.
    Hom {
        source: PathBuf,
        target: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Reflection functor at a sink or source.
    Reflect {
        path: PathBuf,
        #[arg(long)]
        vertex: usize,
    },
    /// Graded endomorphisms of the structure object of a dualizable graph.
    CpmHom {
        path: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Compare wheels and balloon chains with the given indices.
    MirrorCheck {
        #[arg(long, value_delimiter = ',', required = true)]
        indices: Vec<u32>,
        #[command(flatten)]
        out: Output,
    },
    /// Compare both sides of the mirror for one dualizable graph.
    HmsCheck {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Check the covering axioms on the sieves of one graph.
    SieveCheck {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Attach the canonical grading to a chordal graph.
    Grade {
        #[arg(long)]
        graph: PathBuf,
        /// Flow along the zero section the other way.
        #[arg(long)]
        reverse: bool,
    },
    /// Run every verification suite.
    VerifyAll {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest a₁ + a₂ for the wheel/balloon comparison.
        #[arg(long, default_value_t = 6)]
        indices_max: u32,
        /// Largest index sum for the end-to-end comparisons.
        #[arg(long, default_value_t = 5)]
        hms_max: usize,
        /// Random ribbon graphs in the genus suite.
        #[arg(long, default_value_t = 60)]
        corpus: usize,
        /// Run only these suites.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
        #[command(flatten)]
        out: Output,
    },
}

/// Why a command stopped.
#[derive(Debug)]
pub enum Failure {
    Invalid(String),
    Unverified(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Unverified(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Invalid(m) | Failure::Unverified(m) | Failure::Io(m) => m,
        }
    }
}

pub type Outcome = Result<(), Failure>;

pub fn invalid(e: impl std::fmt::Display) -> Failure {
    Failure::Invalid(e.to_string())
}

pub fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure::Invalid(format!("{}: malformed JSON: {e}", path.display())))
}

/// Write to stdout; a closed pipe is not an error.
pub fn out(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

/// Print `value` as pretty JSON or `table` as text.
pub fn emit(json: bool, value: &impl Serialize, table: impl FnOnce() -> String) {
    let text = if json { serde_json::to_string_pretty(value).expect("reports serialize") } else { table() };
    out(&(text + "\n"));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate { path } => commands::validate(&path),
        Command::Invariants { path, out } => commands::invariants(&path, out.json),
        Command::Dualizable { path, out } => commands::dualizable(&path, out.json),
        Command::ExportDot { path } => commands::export_dot(&path),
        Command::Quiver { path, rep, out } => commands::quiver(&path, rep.as_deref(), out.json),
        Command::Hom { source, target, out } => commands::hom(&source, &target, out.json),
        Command::Reflect { path, vertex } => commands::reflect(&path, vertex),
        Command::CpmHom { path, out } => commands::cpm_hom(&path, out.json),
        Command::MirrorCheck { indices, out } => commands::mirror_check(&indices, out.json),
        Command::HmsCheck { graph, out } => commands::hms_check(&graph, out.json),
        Command::SieveCheck { graph, out } => commands::sieve_check(&graph, out.json),
        Command::Grade { graph, reverse } => commands::grade(&graph, reverse),
        Command::VerifyAll { seed, indices_max, hms_max, corpus, only, out } => {
            commands::verify_all(seed, indices_max, hms_max, corpus, &only, out.json)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
