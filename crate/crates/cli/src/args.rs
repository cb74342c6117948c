use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use symcamel::Ordering;

#[derive(Debug, Parser)]
#[command(name = "symcamel", version, about = "Quantum covariance matrices, symplectic spectra and shadow volumes")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct GlobalOpts {
    /// Reduced Planck constant (default 1); must match the input document if it sets one.
    #[arg(long, global = true)]
    pub hbar: Option<f64>,

    /// Coordinate ordering of the input matrix.
    #[arg(long, global = true, value_enum)]
    pub ordering: Option<OrderingArg>,

    /// Relative asymmetry accepted when reading a matrix.
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,

    /// Omit the version banner from text output.
    #[arg(long, global = true)]
    pub no_banner: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Structured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrderingArg {
    BlockXp,
    Interleaved,
}

impl From<OrderingArg> for Ordering {
    fn from(o: OrderingArg) -> Self {
        match o {
            OrderingArg::BlockXp => Ordering::BlockXp,
            OrderingArg::Interleaved => Ordering::Interleaved,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide quantum validity and print the full analysis report.
    Check {
        /// Matrix file (JSON document or CSV), or `-` for standard input.
        input: PathBuf,
    },
    /// Symplectic eigenvalues by two routes.
    Spectrum { input: PathBuf },
    /// Williamson normal form S^T sigma S = diag(Lambda, Lambda).
    Williamson { input: PathBuf },
    /// Shadow volumes of the covariance ellipsoid on subspaces.
    Project {
        input: PathBuf,

        /// Coordinate symplectic subspace as 1-based mode indices, e.g. `1,3`. Repeatable.
        #[arg(long)]
        modes: Vec<String>,

        /// Random symplectic subspaces: dimension 2k, how many, seed.
        #[arg(long, num_args = 3, value_names = ["K", "COUNT", "SEED"])]
        random: Option<Vec<u64>>,

        /// Draw the `--random` subspaces among complex ones (coordinate
        /// subspaces moved by symplectic rotations), where the bound is a theorem.
        #[arg(long, requires = "random")]
        complex: bool,

        /// Span of coordinate axes such as `x1,x2` (need not be symplectic). Repeatable.
        #[arg(long)]
        axes: Vec<String>,
    },
    /// Randomized linear non-squeezing campaign for balls.
    Camel {
        /// Degrees of freedom.
        #[arg(short = 'n', long = "dof")]
        n: usize,
        /// Half-dimension of the coordinate subspaces.
        #[arg(short, long)]
        k: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Entry range of the random Hamiltonian generator.
        #[arg(long, default_value_t = 1.0)]
        spread: f64,
    },
    /// Universal invariants Delta_j by three routes.
    Invariants { input: PathBuf },
}
