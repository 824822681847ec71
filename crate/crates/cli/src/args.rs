use std::path::PathBuf;

use cdg_core::forms::Scheme;
use cdg_core::mesh::SwitchStrategy;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "cdglab", version, about = "CDG, LDG and BR2 discretizations of the 2D Poisson problem")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the manufactured problem; reports L2 and H1-seminorm errors and the residual per cell.
    Solve(RunArgs),
    /// L2 error grid over schemes, degrees, meshes and C11 values, with rates.
    Convergence(RunArgs),
    /// Null-space dimension of the stiffness matrix (periodic mesh).
    Nullspace(RunArgs),
    /// Spectral radius of M^-1 A scaled by (h/p)^2.
    Spectrum(RunArgs),
    /// Nonzeros per interior element from the closed-form counts, d = 1..3.
    Memory(RunArgs),
    /// Structural sparsity of an assembled matrix; optional PBM and coordinate exports.
    Sparsity(SparsityArgs),
    /// Write a mesh as JSON (input for `sparsity --mesh`).
    Mesh(MeshArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SwitchArg {
    Consistent,
    Natural,
}

impl From<SwitchArg> for SwitchStrategy {
    fn from(s: SwitchArg) -> Self {
        match s {
            SwitchArg::Consistent => SwitchStrategy::Consistent,
            SwitchArg::Natural => SwitchStrategy::Natural,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Schemes, comma separated (cdg, ldg, br2).
    #[arg(long, value_delimiter = ',')]
    pub scheme: Vec<Scheme>,
    /// Switch strategies, comma separated.
    #[arg(long = "switch", value_delimiter = ',')]
    pub switch: Vec<SwitchArg>,
    /// Polynomial degrees, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub p: Vec<usize>,
    /// Mesh resolutions (squares per side), comma separated.
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
    /// Interior C11 values, comma separated.
    #[arg(long = "c11-interior", value_delimiter = ',')]
    pub c11_interior: Vec<f64>,
    /// Boundary C11; defaults to the interior value of each cell.
    #[arg(long = "c11-boundary")]
    pub c11_boundary: Option<f64>,
    /// BR2 lifting weight.
    #[arg(long, default_value_t = 3.0)]
    pub eta: f64,
    /// Periodic unit square (no boundary faces).
    #[arg(long)]
    pub periodic: bool,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Use a random polynomial of degree p as the exact solution.
    #[arg(long = "poly-exact")]
    pub poly_exact: bool,
    /// Seed for `--poly-exact` coefficients.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct SparsityArgs {
    /// Mesh JSON; a structured mesh of size `--n` when omitted.
    #[arg(long)]
    pub mesh: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    pub scheme: Vec<Scheme>,
    #[arg(long = "switch", value_enum, default_value_t = SwitchArg::Consistent)]
    pub switch: SwitchArg,
    #[arg(long, default_value_t = 3)]
    pub p: usize,
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    #[arg(long)]
    pub periodic: bool,
    #[arg(long = "c11-interior", default_value_t = 0.0)]
    pub c11_interior: f64,
    #[arg(long = "c11-boundary", default_value_t = 1.0)]
    pub c11_boundary: f64,
    #[arg(long, default_value_t = 3.0)]
    pub eta: f64,
    /// Write the structural pattern of each scheme as PBM; `{scheme}` in the
    /// path is replaced by the scheme name.
    #[arg(long)]
    pub pbm: Option<String>,
    /// Write each assembled matrix as `row col value` text; `{scheme}` is replaced.
    #[arg(long)]
    pub matrix: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct MeshArgs {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long)]
    pub periodic: bool,
    /// The four-triangle mesh with a noncompact LDG coupling.
    #[arg(long = "four-triangle")]
    pub four_triangle: bool,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
