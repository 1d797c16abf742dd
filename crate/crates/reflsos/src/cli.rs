use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Clone, Debug, Parser, Serialize)]
#[command(name = "reflsos", version, about = "Invariant sums of squares for the reflection groups S_n, B_n and D_n")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct GlobalOpts {
    /// Seed for sampling and probe points
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Numeric verification tolerance
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Iterations per shift of the projection solver
    #[arg(long, global = true, default_value_t = 4000)]
    pub max_iter: usize,
    /// Largest denominator used when rationalising
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub max_den: u64,
    /// Worker cap; computations are sequential and output does not depend on it
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    /// Largest ambient dimension C(n+d-1,d) accepted
    #[arg(long, global = true, default_value_t = 20_000)]
    pub max_dim: usize,
    /// Write the JSON report here instead of stdout
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Human-readable summary instead of JSON
    #[arg(long, global = true)]
    pub text: bool,
}

#[derive(Clone, Debug, Args, Serialize)]
pub struct GroupArgs {
    /// Group as FAMILY:N, e.g. B:3
    #[arg(long)]
    pub group: String,
    /// Fundamental invariants: psum, pmean or esq (B_n only)
    #[arg(long, default_value = "psum")]
    pub coords: String,
}

#[derive(Clone, Debug, Subcommand, Serialize)]
pub enum Command {
    /// Higher Specht catalog and symmetry-adapted basis of H_{n,d}
    Basis {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        degree: u32,
    },
    /// Block matrices of symmetrised products for H_{n,d}
    Blocks {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        degree: u32,
    },
    /// Decide whether an invariant form is an invariant sum of squares
    SosCheck {
        #[command(flatten)]
        group: GroupArgs,
        /// File holding the polynomial in text form
        #[arg(long, conflicts_with = "poly")]
        input: Option<PathBuf>,
        /// The polynomial in text form
        #[arg(long)]
        poly: Option<String>,
        /// Half degree d, needed only for the zero polynomial
        #[arg(long)]
        degree: Option<u32>,
        /// Write the program in SDPA sparse format
        #[arg(long)]
        sdpa: Option<PathBuf>,
        /// Include the certificate matrices
        #[arg(long)]
        certificate: bool,
    },
    /// Dual-cone verification for a classified case
    DualCheck {
        /// b3-octics, d4-quartics or bn-octics:N
        #[arg(long)]
        case: String,
        /// Grid size per family (b3-octics)
        #[arg(long, default_value_t = 64)]
        grid: usize,
        /// Random dual points (d4-quartics)
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Harmonic polynomials, Hilbert series and the Jacobian constant
    Harmonics {
        #[arg(long)]
        group: String,
        #[arg(long)]
        coords: Option<String>,
        /// Largest harmonic dimension computed
        #[arg(long, default_value_t = 5000)]
        cap: usize,
    },
    /// Multiplicity tables near the trivial isotype for growing n
    Stabilization {
        /// S, B or D
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 4)]
        degree: u32,
        /// Inclusive range a..b or a list a,b,c
        #[arg(long, default_value = "8..11")]
        n: String,
    },
    /// Reproduction suite
    #[command(name = "verify-paper")]
    Verify {
        /// b3-octics, d4-quartics, bn-octics, limits, regular-rep,
        /// dimensions, stabilization, counterexample or all
        case: String,
        /// n values for bn-octics or stabilization
        #[arg(long)]
        n: Option<String>,
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long, default_value_t = 64)]
        grid: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}
