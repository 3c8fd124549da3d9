//! Flag definitions. Each subcommand only declares the parameter flags of its own
//! layer, so mixing `--kappa` with `(q, alpha, beta)` is rejected by the parser.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "qglauber",
    version,
    about = "q-series kernels, q-orthogonal polynomials and the kinetic Ising chain with gamma_n = tanh(kappa n)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// csv: header row, LF, floats with 17 significant digits. json: {"meta": {...}, "data": [rows]}.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

/// The polynomial-family parameters.
#[derive(Args, Debug, Clone)]
pub struct TripleArgs {
    /// Base, 0 < q < 1.
    #[arg(long, allow_hyphen_values = true)]
    pub q: f64,
    /// |alpha| < 1.
    #[arg(long, allow_hyphen_values = true, required_unless_present = "alpha_eq_q", conflicts_with = "alpha_eq_q")]
    pub alpha: Option<f64>,
    /// Use alpha = q.
    #[arg(long)]
    pub alpha_eq_q: bool,
    /// beta < 1.
    #[arg(long, allow_hyphen_values = true)]
    pub beta: f64,
}

/// Chain coupling `gamma_n = tanh(kappa n)`.
#[derive(Args, Debug, Clone)]
pub struct ChainArgs {
    /// kappa > 0.
    #[arg(long)]
    pub kappa: f64,
}

#[derive(Args, Debug, Clone)]
pub struct TimeArgs {
    /// Single time.
    #[arg(long, conflicts_with = "t_grid")]
    pub t: Option<f64>,
    /// Time grid `a:b:n` (n points, linear) or `a:b:n:log` (geometric, a > 0).
    #[arg(long, required_unless_present = "t")]
    pub t_grid: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct TolArgs {
    /// Tolerance in (0, 1e-2].
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OracleMode {
    /// Truncated Jacobi matrix exponential (magnetization only).
    Expm,
    /// Exact master equation, at most 12 sites.
    Master,
    /// Pair-correlation ODE (correlation only).
    Pair,
    /// Gillespie sampler; adds a standard-error column.
    Sample,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Observable {
    Magnetization,
    Correlation,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// (a; q)_n. Columns: re,im.
    Qpoch {
        #[arg(long)]
        q: f64,
        /// `re` or `re,im`.
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        /// Integer order (may be negative) or `inf`.
        #[arg(long, allow_hyphen_values = true, default_value = "inf")]
        n: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// r phi s (numerators; denominators; q, z). Columns: re,im,terms,tail_bound.
    Phi {
        #[arg(long)]
        q: f64,
        /// Comma-separated real numerator parameters.
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        num: Vec<f64>,
        /// Comma-separated real denominator parameters.
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        den: Vec<f64>,
        /// `re` or `re,im`.
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[command(flatten)]
        tol: TolArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Monic p_n(x) by the three-term recurrence. Columns: x,n,value.
    Poly {
        #[command(flatten)]
        params: TripleArgs,
        /// Highest degree.
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        /// Grid `a:b:n` of x values.
        #[arg(long, allow_hyphen_values = true, default_value = "-3:3:61")]
        x_grid: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Orthogonality measure. Columns: theta,density (midpoint samples on (0, pi)); with --atoms: x,weight.
    Measure {
        #[command(flatten)]
        params: TripleArgs,
        /// Number of density samples.
        #[arg(long, default_value_t = 256)]
        samples: usize,
        /// Emit the point masses instead of the density.
        #[arg(long)]
        atoms: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Zeros z_k of psi_{-1}^+ in (0, 1). Columns: index,z,x.
    Zeros {
        #[command(flatten)]
        params: TripleArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Generating function: closed form vs truncated series.
    /// Columns: residual,tail_estimate,closed_re,closed_im,series_re,series_im.
    GenfuncCheck {
        #[command(flatten)]
        params: TripleArgs,
        /// Generating variable, `re` or `re,im`, with |t| < |z|.
        #[arg(long = "t", allow_hyphen_values = true)]
        t: String,
        /// Spectral variable, `re` or `re,im`, with |z| < 1.
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, default_value_t = 200)]
        n_max: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Magnetization kernels q_n^(k)(t) or superposed trajectories. Columns: t,n,k,value
    /// (k = 0 marks a superposition over all initial sites).
    Magnetization {
        #[command(flatten)]
        chain: ChainArgs,
        #[command(flatten)]
        time: TimeArgs,
        /// One kernel q_n^(k).
        #[arg(long, num_args = 2, value_names = ["N", "K"], conflicts_with_all = ["from", "uniform"])]
        kernel: Option<Vec<usize>>,
        /// Kernels q_n^(K) for every n in --sites.
        #[arg(long, value_name = "K", conflicts_with = "uniform")]
        from: Option<usize>,
        /// Superposition from a uniform initial magnetization M.
        #[arg(long, value_name = "M", allow_hyphen_values = true)]
        uniform: Option<f64>,
        /// Output sites: `a:b`, `a,b,c` or `n`.
        #[arg(long, default_value = "1:5")]
        sites: String,
        #[command(flatten)]
        tol: TolArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Two-spin correlations r_{m,n}(t) for m < n in --sites, from independent spins
    /// with magnetization M (so r_{k,l}(0) = M^2). Columns: t,m,n,value.
    Correlation {
        #[command(flatten)]
        chain: ChainArgs,
        #[command(flatten)]
        time: TimeArgs,
        #[arg(long, value_name = "M", allow_hyphen_values = true, default_value_t = 0.0)]
        uniform: f64,
        #[arg(long, default_value = "1:5")]
        sites: String,
        /// Sites kept in the stationary solution and in the superposition.
        #[arg(long, default_value_t = 48)]
        window: usize,
        #[command(flatten)]
        tol: TolArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Stationary correlations rho_{m,n} for m, n in --sites. Columns: m,n,value.
    Stationary {
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long, default_value = "1:5")]
        sites: String,
        #[command(flatten)]
        tol: TolArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Numeric kernels vs their large-t expansions.
    /// Columns: t,n,k,numeric,asymptotic,ratio (or t,m,n,k,l,... with --pair).
    Asymptotics {
        #[command(flatten)]
        chain: ChainArgs,
        #[command(flatten)]
        time: TimeArgs,
        #[arg(long, num_args = 2, value_names = ["N", "K"], required_unless_present = "pair", conflicts_with = "pair")]
        kernel: Option<Vec<usize>>,
        /// Two-spin kernel r_{m,n}^{(k,l)} with m > n, k > l.
        #[arg(long, num_args = 4, value_names = ["M", "N", "K", "L"])]
        pair: Option<Vec<usize>>,
        /// Terms of the magnetization expansion (1, 2 or 3).
        #[arg(long, default_value_t = 3)]
        order: u8,
        #[command(flatten)]
        tol: TolArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Finite-chain oracles. Columns: t,n,value (magnetization) or t,m,n,value (correlation);
    /// `sample` appends se.
    Oracle {
        #[arg(value_enum)]
        mode: OracleMode,
        #[command(flatten)]
        chain: ChainArgs,
        #[command(flatten)]
        time: TimeArgs,
        /// Chain sites; the chain length is the largest index.
        #[arg(long, default_value = "1:6")]
        sites: String,
        /// Initial spins, comma-separated +-1 (default all +1).
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        spins: Option<Vec<i8>>,
        /// Defaults to correlation for `pair`, magnetization otherwise.
        #[arg(long, value_enum)]
        observable: Option<Observable>,
        #[arg(long, default_value_t = 10_000)]
        trajectories: usize,
        #[arg(long, default_value_t = 20261018)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Runs the acceptance suite and prints a pass/fail table. Exits non-zero if any check fails.
    Verify {
        /// Fewer sampler trajectories.
        #[arg(long)]
        quick: bool,
        /// Exit zero when the only failures are the documented unattainable checks.
        #[arg(long)]
        allow_known: bool,
        /// Comma-separated criterion numbers.
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<u8>>,
    },
}
