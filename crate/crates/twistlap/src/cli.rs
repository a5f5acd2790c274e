//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Twisted Dolbeault and Dirac spectra on the round sphere and the flat torus.
#[derive(Debug, Parser)]
#[command(name = "twistlap", version, about, propagate_version = true)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Output file (standard output if omitted).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for Lanczos start vectors and probe vectors.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

/// Output encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// One JSON document (see `twistlap schema`).
    Json,
    /// Comma-separated rows, 17 significant digits.
    Csv,
    /// Aligned text for terminals.
    Table,
}

/// Subcommands.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Smallest eigenvalues of a twisted operator.
    Spectrum(SpectrumArgs),
    /// Check the eigenvalue bounds over a sweep of degrees.
    Verify(VerifyArgs),
    /// Convergence study under grid refinement.
    Convergence(ConvergenceArgs),
    /// Closed-form bounds and spectra (no numerics).
    #[command(subcommand)]
    Oracle(OracleCommand),
    /// Print the JSON schema of the output document.
    Schema,
}

/// Base surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GeometryArg {
    /// Round sphere of scalar curvature `--R`.
    Sphere,
    /// Flat square torus of volume `--vol`.
    Torus,
}

/// Surface selection shared by the numerical subcommands.
#[derive(Debug, Clone, Args)]
pub struct SurfaceArgs {
    /// Base surface.
    #[arg(long, value_enum)]
    pub geometry: GeometryArg,
    /// Scalar curvature of the sphere.
    #[arg(long = "R", default_value_t = 2.0)]
    pub r: f64,
    /// Volume of the torus.
    #[arg(long, default_value_t = 1.0)]
    pub vol: f64,
}

/// Operators available to `spectrum`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OperatorArg {
    /// Dolbeault Laplacian on sections.
    Dolbeault,
    /// Trace (Bochner) Laplacian on sections.
    Trace,
    /// Twisted Dirac operator (positive eigenvalues).
    Dirac,
}

/// Arguments of `spectrum`.
#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    /// Degree of the line bundle (negative).
    #[arg(long)]
    pub degree: i64,
    /// Operator to diagonalize.
    #[arg(long, value_enum, default_value_t = OperatorArg::Dolbeault)]
    pub operator: OperatorArg,
    /// Grid parameter (default 400 on the sphere, 64 on the torus).
    #[arg(long)]
    pub grid: Option<usize>,
    /// Number of eigenvalues.
    #[arg(long, default_value_t = 5)]
    pub k: usize,
    /// Eigen-residual tolerance.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Relative gap below which eigenvalues form one cluster.
    #[arg(long, default_value_t = 1e-3)]
    pub cluster_tol: f64,
    /// Restrict the sphere computation to one azimuthal mode.
    #[arg(long)]
    pub mode: Option<i64>,
}

/// Theorem selection for `verify`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum TheoremArg {
    /// Dolbeault bound.
    Main,
    /// Complex Dirac bound.
    Cor1,
    /// Real Dirac bound.
    Cor2,
    /// All three.
    All,
}

/// Arguments of `verify`.
#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    /// Which bound to check.
    #[arg(long, value_enum, default_value_t = TheoremArg::All)]
    pub theorem: TheoremArg,
    /// Degrees: an inclusive range `a..b` or a comma-separated list.
    #[arg(long, allow_hyphen_values = true)]
    pub degrees: String,
    /// Grid parameter (default 400 on the sphere, 64 on the torus).
    #[arg(long)]
    pub grid: Option<usize>,
    /// Eigenvalues reported per configuration.
    #[arg(long, default_value_t = 4)]
    pub k: usize,
    /// Eigen-residual tolerance.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Relative slack for the bound check (default scales as 1/N²).
    #[arg(long)]
    pub slack: Option<f64>,
    /// Relative tolerance for sharpness (default scales as 1/N).
    #[arg(long)]
    pub sharp_tol: Option<f64>,
}

/// Tracked quantity for `convergence`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TargetArg {
    /// Smallest Dolbeault eigenvalue.
    GroundEig,
    /// Weitzenböck residual.
    WeitzenbockResidual,
}

/// Arguments of `convergence`.
#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct ConvergenceArgs {
    #[command(flatten)]
    pub surface: SurfaceArgs,
    /// Degree of the line bundle (negative).
    #[arg(long)]
    pub degree: i64,
    /// Strictly increasing grid sizes, comma-separated (at least three).
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub grids: Vec<usize>,
    /// Tracked quantity.
    #[arg(long, value_enum, default_value_t = TargetArg::GroundEig)]
    pub target: TargetArg,
    /// Eigen-residual tolerance.
    #[arg(long, default_value_t = 1e-11)]
    pub tol: f64,
}

/// Closed-form evaluations.
#[derive(Debug, Clone, Subcommand)]
pub enum OracleCommand {
    /// Naive Dolbeault bound −π·d/((n−1)!·r·vol).
    BoundNaive(BundleArgs),
    /// Sharp Dolbeault bound (2n/(2n−1))·naive.
    BoundMain(BundleArgs),
    /// Complex Dirac bound √(−4π·d/(r·vol)).
    BoundDiracComplex(DiracArgs),
    /// Real Dirac bound √(4π(1−g)/vol − 4π·d/(r·vol)).
    BoundDiracReal(RealDiracArgs),
    /// Positive Dirac spectrum on the round sphere.
    SphereDirac(SphereDiracArgs),
    /// Dolbeault spectrum on the round sphere.
    SphereDolbeault(SphereDolbeaultArgs),
    /// Landau levels of the Dolbeault Laplacian on the torus.
    TorusDolbeault(TorusDolbeaultArgs),
    /// Dirac eigenvalues √(2λ) from Dolbeault eigenvalues.
    DiracFromDolbeault(ValuesArgs),
    /// Hermitian–Einstein constant 2π·d/((n−1)!·r·vol).
    HeConstant(BundleArgs),
    /// Degree d − r(1−g) of K^{1/2} ⊗ E.
    TwistDegree(TwistArgs),
}

/// Bundle data `(n, d, r, vol)`.
#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct BundleArgs {
    /// Complex dimension of the base.
    #[arg(long, default_value_t = 1)]
    pub n: u32,
    /// Degree.
    #[arg(long)]
    pub degree: i64,
    /// Rank.
    #[arg(long, default_value_t = 1)]
    pub rank: u32,
    /// Volume.
    #[arg(long)]
    pub vol: f64,
}

/// Arguments of `bound-dirac-complex`.
#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct DiracArgs {
    /// Degree.
    #[arg(long)]
    pub degree: i64,
    /// Rank.
    #[arg(long, default_value_t = 1)]
    pub rank: u32,
    /// Volume.
    #[arg(long)]
    pub vol: f64,
}

/// Arguments of `bound-dirac-real`.
#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct RealDiracArgs {
    /// Genus of the surface.
    #[arg(long)]
    pub genus: u32,
    /// Degree.
    #[arg(long)]
    pub degree: i64,
    /// Rank.
    #[arg(long, default_value_t = 1)]
    pub rank: u32,
    /// Volume.
    #[arg(long)]
    pub vol: f64,
}

/// Arguments of `sphere-dirac`.
#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct SphereDiracArgs {
    /// Scalar curvature.
    #[arg(long = "R")]
    pub r: f64,
    /// Degree of the twisting line bundle L.
    #[arg(long = "degL")]
    pub deg_l: i64,
    /// Largest level index.
    #[arg(long)]
    pub qmax: u32,
}

/// Arguments of `sphere-dolbeault`.
#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct SphereDolbeaultArgs {
    /// Scalar curvature.
    #[arg(long = "R")]
    pub r: f64,
    /// Degree.
    #[arg(long)]
    pub degree: i64,
    /// Largest level index.
    #[arg(long)]
    pub qmax: u32,
}

/// Arguments of `torus-dolbeault`.
#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct TorusDolbeaultArgs {
    /// Volume.
    #[arg(long)]
    pub vol: f64,
    /// Degree.
    #[arg(long)]
    pub degree: i64,
    /// Largest level index.
    #[arg(long)]
    pub kmax: u32,
}

/// Arguments of `dirac-from-dolbeault`.
#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct ValuesArgs {
    /// Comma-separated Dolbeault eigenvalues (may be empty).
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub values: Vec<f64>,
}

/// Arguments of `twist-degree`.
#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct TwistArgs {
    /// Degree.
    #[arg(long)]
    pub degree: i64,
    /// Rank.
    #[arg(long, default_value_t = 1)]
    pub rank: u32,
    /// Genus.
    #[arg(long)]
    pub genus: u32,
}
