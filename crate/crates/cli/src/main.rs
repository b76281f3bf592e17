//! `permsym` command-line front end.
//!
//! Every subcommand writes one report to stdout (or `--output`). Exit status
//! is 0 on success, 1 when a verification fails and 2 for usage, input or
//! capability errors.

mod commands;

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "permsym", version, about = "Permutation symmetry of assemblies and permutes of finite models")]
struct Cli {
    /// Numerical tolerance for verification reports.
    #[arg(long, global = true, default_value_t = 1e-10)]
    tolerance: f64,

    /// Output format. Not every command supports every format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Args)]
pub struct Dims {
    /// Number of particles.
    #[arg(long)]
    pub n: usize,
    /// Single-particle dimension.
    #[arg(long)]
    pub d: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Measure {
    Bose,
    #[value(alias = "maxwell-boltzmann")]
    Mb,
    #[value(alias = "fermi-dirac")]
    Fd,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sector ranks and generalised-ray bases of (C^d)^{⊗n}.
    Decompose {
        #[command(flatten)]
        dims: Dims,
        /// Same as `--format json`.
        #[arg(long)]
        json: bool,
        /// Seed for the ray extraction.
        #[arg(long, default_value_t = permsym::sectors::DEFAULT_RAY_SEED)]
        seed: u64,
    },
    /// Σ(A) for a matrix read as JSON (`-` for stdin).
    Symmetrise {
        #[command(flatten)]
        dims: Dims,
        input: String,
    },
    /// Sampled check of the trace identities and superselection invariance.
    VerifyIdentities {
        #[command(flatten)]
        dims: Dims,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sector weights of a state vector, given as JSON or as a basis label.
    Classify {
        #[command(flatten)]
        dims: Dims,
        /// Vector JSON file (`-` for stdin).
        #[arg(long, conflicts_with = "basis")]
        input: Option<String>,
        /// Comma-separated basis label, e.g. `0,1,1`.
        #[arg(long)]
        basis: Option<String>,
    },
    /// Σ_α E_α W E_α over {E_S, E_A, E_P} for a density matrix read as JSON.
    Superselect {
        #[command(flatten)]
        dims: Dims,
        input: String,
    },
    /// Two-coin outcome statistics as exact fractions.
    Coins {
        #[arg(long, value_enum)]
        measure: Measure,
    },
    /// Bloch coordinates of ξ|HT⟩ + η|TH⟩, or a CSV sweep over z.
    Bloch {
        #[arg(long, allow_hyphen_values = true, required_unless_present = "sweep")]
        xi: Option<String>,
        #[arg(long, allow_hyphen_values = true, required_unless_present = "sweep")]
        eta: Option<String>,
        /// Grid points per axis; emits CSV.
        #[arg(long, conflicts_with_all = ["xi", "eta"])]
        sweep: Option<usize>,
        /// Half-width of the z grid.
        #[arg(long, default_value_t = 3.0)]
        radius: f64,
    },
    /// Three particles in two levels: the symmetric ray and the invariant plane.
    Fig3 {
        #[arg(long, default_value_t = permsym::sectors::DEFAULT_RAY_SEED)]
        seed: u64,
    },
    /// Symmetry, permutes and descriptions of a model read as JSON.
    Model {
        input: String,
        /// Also check this s-expression formula against the model.
        #[arg(long)]
        formula: Option<String>,
    },
    /// Permutability, fixity and the GPC for a theory read as JSON.
    Theory { input: String },
    /// The renovators and scribes theories.
    ToyTheories,
}

/// What went wrong, mapped to an exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Library(#[from] permsym::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Library(e) if is_verification(e) => 1,
            _ => 2,
        }
    }
}

fn is_verification(e: &permsym::Error) -> bool {
    use permsym::Error::*;
    matches!(e, NumericalIntegrity(_) | InvariantViolation(_) | DecompositionFailure(_) | InternalConsistency(_))
}

/// A finished report: the text and whether its checks passed.
pub struct Report {
    pub body: String,
    pub passed: bool,
}

pub fn read_input(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| CliError::Input(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| CliError::Input(format!("{path}: {e}")))
    }
}

fn run(cli: Cli) -> Result<Report, CliError> {
    if cli.tolerance.is_nan() || cli.tolerance < f64::EPSILON {
        return Err(CliError::Usage(format!("tolerance {} is below machine epsilon", cli.tolerance)));
    }
    let ctx = commands::Context { tolerance: cli.tolerance, format: cli.format };
    match cli.command {
        Command::Decompose { dims, json, seed } => {
            let ctx = if json { commands::Context { format: Format::Json, ..ctx } } else { ctx };
            commands::decompose(&ctx, &dims, seed)
        }
        Command::Symmetrise { dims, input } => commands::symmetrise(&ctx, &dims, &input),
        Command::VerifyIdentities { dims, samples, seed } => commands::verify_identities(&ctx, &dims, samples, seed),
        Command::Classify { dims, input, basis } => commands::classify(&ctx, &dims, input.as_deref(), basis.as_deref()),
        Command::Superselect { dims, input } => commands::superselect(&ctx, &dims, &input),
        Command::Coins { measure } => commands::coins(&ctx, measure),
        Command::Bloch { xi, eta, sweep, radius } => match sweep {
            Some(k) => commands::bloch_sweep(k, radius),
            None => commands::bloch(&ctx, xi.as_deref().unwrap_or_default(), eta.as_deref().unwrap_or_default()),
        },
        Command::Fig3 { seed } => commands::fig3(&ctx, seed),
        Command::Model { input, formula } => commands::model(&input, formula.as_deref()),
        Command::Theory { input } => commands::theory(&input),
        Command::ToyTheories => commands::toy_theories(),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let output = cli.output.clone();
    match run(cli) {
        Ok(report) => {
            let mut body = report.body;
            if !body.ends_with('\n') {
                body.push('\n');
            }
            let written = match &output {
                Some(path) => fs::write(path, body.as_bytes()),
                None => io::stdout().lock().write_all(body.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("permsym: cannot write report: {e}");
                return ExitCode::from(2);
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("permsym: verification failed");
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("permsym: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
