//! `rgflow`: runs one scenario per subcommand and writes CSV, SVG and a
//! JSON manifest.
//!
//! Exit status is 0 on success, 2 for invalid flags or parameters, 3 when an
//! integration or a domain check fails and 1 for I/O errors.

mod commands;
mod output;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rgflow::homogeneous::GeometryFamily;
use rgflow::ode::IntegratorOptions;

#[derive(Parser)]
#[command(name = "rgflow", version, about = "Special solutions of the two-loop RG flow")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve the scale factor of a constant-curvature metric.
    #[command(allow_negative_numbers = true)]
    ConstantCurvature(commands::ConstantCurvatureArgs),
    /// Solve for the fixed points of the normalized flow in three dimensions.
    #[command(allow_negative_numbers = true)]
    FixedPoints(commands::FixedPointsArgs),
    /// Integrate the steady soliton from its tip.
    #[command(allow_negative_numbers = true)]
    Cigar(commands::CigarArgs),
    /// Classify the fate of a symmetric homogeneous metric over a grid.
    #[command(allow_negative_numbers = true)]
    PhasePlane(commands::PhasePlaneArgs),
    /// Evolve one diagonal homogeneous metric.
    #[command(allow_negative_numbers = true)]
    Homogeneous(commands::HomogeneousArgs),
}

/// Flags shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Directory for the CSV, SVG and manifest.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Write the CSV. Without --csv or --svg both are written.
    #[arg(long)]
    pub csv: bool,
    /// Write the SVG plot.
    #[arg(long)]
    pub svg: bool,
    /// Relative tolerance of the integrator.
    #[arg(long, default_value_t = IntegratorOptions::default().rel_tol)]
    pub rel_tol: f64,
    /// Absolute tolerance of the integrator.
    #[arg(long, default_value_t = IntegratorOptions::default().abs_tol)]
    pub abs_tol: f64,
    /// Manifest path; defaults to `<out-dir>/<command>.manifest.json`.
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

pub fn parse_family(s: &str) -> Result<GeometryFamily, String> {
    s.parse().map_err(|e: rgflow::Error| e.to_string())
}

#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Failure(String),
    Io(std::io::Error),
}

impl From<rgflow::Error> for CliError {
    fn from(e: rgflow::Error) -> Self {
        match e {
            rgflow::Error::InvalidParameter(_) => Self::Invalid(e.to_string()),
            _ => Self::Failure(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::ConstantCurvature(args) => commands::constant_curvature(&args),
        Command::FixedPoints(args) => commands::fixed_points(&args),
        Command::Cigar(args) => commands::cigar(&args),
        Command::PhasePlane(args) => commands::phase_plane(&args),
        Command::Homogeneous(args) => commands::homogeneous(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(CliError::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
