//! Command-line arguments.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "fovk", version, about = "Certified weighted-norm GMRES for saddle-point systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generated problem to a directory of Matrix Market files.
    Generate(GenerateArgs),
    /// Compute a field-of-values certificate for the preconditioned operator.
    Certify(CertifyArgs),
    /// Run preconditioned GMRES and write its residual trace.
    Solve(SolveArgs),
    /// Iteration counts over a sequence of grids.
    Scalability(ScalabilityArgs),
    /// Compare measured residuals with the field-of-values and spectral bounds.
    Bounds(BoundsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProblemKind {
    Toeplitz,
    Oseen,
    StokesDarcy,
    Synthetic,
    /// A system directory written by `generate`.
    File,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WindKind {
    /// Recirculating wind with unit peak speed.
    Cavity,
    /// Recirculating wind with unit stream-function amplitude.
    Recirculating,
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PrecondArg {
    Diag,
    Upper,
    Lower,
    InexactUpper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormArg {
    L2,
    H,
    Hinv,
}

#[derive(Debug, Clone, Args)]
pub struct ProblemArgs {
    #[arg(long, value_enum)]
    pub problem: ProblemKind,
    /// Cells per side.
    #[arg(long, default_value_t = 8)]
    pub grid: usize,
    /// Toeplitz block size, or the velocity dimension of a synthetic system.
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    /// Constraint dimension of a synthetic system (default n/2).
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    pub nu: f64,
    #[arg(long, value_enum, default_value_t = WindKind::Cavity)]
    pub wind: WindKind,
    /// Drop the Stokes–Darcy interface coupling.
    #[arg(long)]
    pub decoupled: bool,
    #[arg(long, default_value_t = 0.1)]
    pub eta: f64,
    #[arg(long, default_value_t = 2.0)]
    pub c1: f64,
    #[arg(long, default_value_t = 0.5)]
    pub c2: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Multiplies the generated `H2`.
    #[arg(long, default_value_t = 1.0)]
    pub h2_scale: f64,
    /// System directory for `--problem file`.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct PrecondArgs {
    #[arg(long, value_enum, default_value_t = PrecondArg::Upper)]
    pub precond: PrecondArg,
    #[arg(long, value_enum, default_value_t = SideArg::Left)]
    pub side: SideArg,
}

#[derive(Debug, Clone, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub precond: PrecondArgs,
    #[arg(long, default_value_t = fovk::fov::DEFAULT_ANGLES)]
    pub angles: usize,
    /// Also compute the numerical radius of the inverse.
    #[arg(long)]
    pub numerical_radius: bool,
    /// Require `bc < 1`; otherwise excluding the origin suffices.
    #[arg(long)]
    pub strict: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub precond: PrecondArgs,
    /// Norm minimized by GMRES (default: H for left, H⁻¹ for right).
    #[arg(long, value_enum)]
    pub norm: Option<NormArg>,
    #[arg(long, default_value_t = 1e-5)]
    pub tol: f64,
    #[arg(long, default_value_t = 500)]
    pub maxit: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct ScalabilityArgs {
    #[arg(long, value_enum)]
    pub problem: ProblemKind,
    /// Ascending list of grids.
    #[arg(long, value_delimiter = ',', default_values_t = [8, 16, 32])]
    pub grids: Vec<usize>,
    #[arg(long, default_value_t = 1.0)]
    pub nu: f64,
    #[arg(long, value_enum, default_value_t = WindKind::Cavity)]
    pub wind: WindKind,
    #[arg(long, default_value_t = 1.0)]
    pub h2_scale: f64,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [PrecondArg::Diag, PrecondArg::Upper])]
    pub precond: Vec<PrecondArg>,
    #[arg(long, value_enum, default_value_t = SideArg::Left)]
    pub side: SideArg,
    #[arg(long, default_value_t = 1e-5)]
    pub tol: f64,
    #[arg(long, default_value_t = 500)]
    pub maxit: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub precond: PrecondArgs,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 500)]
    pub maxit: usize,
    #[arg(long, default_value_t = 64)]
    pub angles: usize,
    /// Largest polynomial degree of the bound curves.
    #[arg(long, default_value_t = 30)]
    pub degrees: usize,
    #[arg(long)]
    pub out: PathBuf,
}
