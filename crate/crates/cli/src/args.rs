use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Serialize, Serializer};

#[derive(Debug, Parser)]
#[command(name = "jnu", version, about = "Bessel zeros, EPD propagators and two-snapshot reconstruction")]
#[command(args_override_self = true)]
pub struct Cli {
    /// TOML file; keys of the table `[group.command]` act as default flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Group,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Group {
    /// Evaluate j_ν, its zeros and zero ratios
    #[command(subcommand)]
    Bessel(BesselCmd),
    /// Liouville chains, irrationality measures and measure covers
    #[command(subcommand)]
    Liouville(LiouvilleCmd),
    /// Propagate and check the Euler-Poisson-Darboux equation on a periodic grid
    #[command(subcommand)]
    Epd(EpdCmd),
    /// Two-snapshot reconstruction
    #[command(subcommand)]
    Snapshot(SnapshotCmd),
}

/// Complex number written `re` or `re,im`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexArg(pub Complex64);

impl FromStr for ComplexArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        jnu_core::scalar::parse_complex(s)
            .map(ComplexArg)
            .ok_or_else(|| format!("expected `re` or `re,im`, got `{s}`"))
    }
}

impl fmt::Display for ComplexArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.0.re, self.0.im)
    }
}

impl Serialize for ComplexArg {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.0.re, self.0.im].serialize(s)
    }
}

/// Comma-separated list.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct List<T>(pub Vec<T>);

impl<T: FromStr> FromStr for List<T>
where
    T::Err: fmt::Display,
{
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(|p| p.parse::<T>().map_err(|e| format!("bad list entry `{p}`: {e}")))
            .collect::<Result<Vec<_>, _>>()
            .map(List)
    }
}

#[derive(Debug, Subcommand)]
pub enum BesselCmd {
    /// j_ν, j_ν′ and Γ(ν+1) j_ν at points x + i·im.
    Eval(BesselEval),
    /// Zeros with residuals.
    Zeros(BesselZeros),
    /// a_k / a_n.
    Ratio(BesselRatio),
}

#[derive(Debug, Args, Serialize)]
pub struct BesselEval {
    #[arg(long)]
    pub nu: ComplexArg,
    #[arg(long, default_value = "1")]
    pub x: List<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub im: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct BesselZeros {
    #[arg(long)]
    pub nu: ComplexArg,
    #[arg(long, default_value_t = 10)]
    pub count: usize,
    /// First index.
    #[arg(long, default_value_t = 1)]
    pub start: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct BesselRatio {
    #[arg(long)]
    pub nu: f64,
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
}

#[derive(Debug, Subcommand)]
pub enum LiouvilleCmd {
    /// θ(n, x).
    Theta(LiouvilleTheta),
    /// Θ-chain for a bit prefix.
    Chain(LiouvilleChain),
    /// Best ratio approximation and its quality exponent.
    Quality(LiouvilleQuality),
    /// Measure of the interval cover against its bound, per p.
    Measure(LiouvilleMeasure),
}

#[derive(Debug, Args, Serialize)]
pub struct LiouvilleTheta {
    #[arg(long, default_value_t = 0.5)]
    pub nu: f64,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub x: f64,
    /// Zeros computed before the surrogate takes over.
    #[arg(long, default_value_t = 200)]
    pub computed: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct LiouvilleChain {
    #[arg(long, default_value_t = 0.5)]
    pub nu: f64,
    #[arg(long, default_value_t = 10)]
    pub cutoff: u64,
    /// Bit prefix ε₁ε₂…, e.g. `101`.
    #[arg(long)]
    pub bits: String,
    /// Defaults to the prefix length.
    #[arg(long)]
    pub depth: Option<usize>,
    /// Starting value as `p/q` or an integer.
    #[arg(long, default_value = "1/2")]
    pub x_start: String,
    #[arg(long, default_value_t = 3.0)]
    pub constant: f64,
    #[arg(long, default_value_t = jnu_core::liouville::DEFAULT_BUDGET_BITS)]
    pub budget_bits: u64,
    #[arg(long, default_value_t = 200)]
    pub computed: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct LiouvilleQuality {
    #[arg(long, default_value_t = 0.5)]
    pub nu: f64,
    /// Target; `p/q` selects exact arithmetic on the half-order lattice.
    #[arg(long, conflicts_with = "liouville_terms")]
    pub x: Option<String>,
    /// Use Σ_{k≤K} 10^{−k!} as the target.
    #[arg(long)]
    pub liouville_terms: Option<u32>,
    /// Largest admissible denominator value a_n.
    #[arg(long)]
    pub bound: f64,
    #[arg(long, default_value_t = 200)]
    pub computed: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct LiouvilleMeasure {
    #[arg(long, default_value_t = 0.5)]
    pub nu: f64,
    #[arg(long, default_value_t = 2.0)]
    pub l: f64,
    #[arg(long, default_value = "3,4,5,6,7,8")]
    pub p: List<f64>,
    #[arg(long, default_value_t = 200)]
    pub n_max: usize,
}

#[derive(Debug, Subcommand)]
pub enum EpdCmd {
    /// f ∗ m_α^t.
    Propagate(EpdPropagate),
    /// Finite-difference residual of the EPD equation and its order.
    Residual(EpdResidual),
    /// max |U(s,t) − U(t,s)|.
    Asgeirsson(EpdAsgeirsson),
    /// Lower envelope of |j_ν| near each frequency.
    Slowdecrease(EpdSlowDecrease),
}

#[derive(Debug, Args, Serialize)]
pub struct EpdPropagate {
    #[arg(long)]
    pub f: PathBuf,
    #[arg(long)]
    pub t: f64,
    #[arg(long, default_value = "0")]
    pub alpha: ComplexArg,
    /// Grid file for the result.
    #[arg(long)]
    pub grid_out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct EpdResidual {
    #[arg(long)]
    pub f: PathBuf,
    #[arg(long, default_value = "0")]
    pub alpha: ComplexArg,
    #[arg(long, default_value = "0.5,1,1.5,2")]
    pub t: List<f64>,
    #[arg(long, default_value_t = 0.02)]
    pub ht: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct EpdAsgeirsson {
    #[arg(long)]
    pub f: PathBuf,
    #[arg(long, default_value = "0")]
    pub alpha: ComplexArg,
    /// Grid multi-index of the evaluation point; defaults to the origin.
    #[arg(long)]
    pub x: Option<List<usize>>,
    #[arg(long, default_value = "0.5,1,1.5")]
    pub times: List<f64>,
    /// Also run the nested spherical-mean quadrature (n = 2, α = 0).
    #[arg(long)]
    pub quadrature: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct EpdSlowDecrease {
    #[arg(long)]
    pub nu: ComplexArg,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    #[arg(long, default_value_t = 200.0)]
    pub xi_max: f64,
}

#[derive(Debug, Subcommand)]
pub enum SnapshotCmd {
    /// Forward-generate g = f ∗ m^s and h = f ∗ m^r.
    Make(SnapshotMake),
    /// Compatibility residual, and the strong one when a and b are given.
    Check(SnapshotCheck),
    /// Per-frequency reconstruction of f.
    Reconstruct(SnapshotReconstruct),
    /// Small-denominator scan of |j_ν(rz)| + |j_ν(sz)|.
    Scan(SnapshotScan),
    /// Kernel function for j_ν-rational r/s.
    Witness(SnapshotWitness),
}

#[derive(Debug, Args, Serialize)]
pub struct SnapshotMake {
    #[arg(long)]
    pub f: PathBuf,
    #[arg(long)]
    pub r: f64,
    #[arg(long)]
    pub s: f64,
    #[arg(long, default_value = "0")]
    pub alpha: ComplexArg,
    #[arg(long, default_value = "g.grid")]
    pub g_out: PathBuf,
    #[arg(long, default_value = "h.grid")]
    pub h_out: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct SnapshotPair {
    /// Snapshot at time s.
    #[arg(long)]
    pub g: PathBuf,
    /// Snapshot at time r.
    #[arg(long)]
    pub h: PathBuf,
    #[arg(long)]
    pub r: f64,
    #[arg(long)]
    pub s: f64,
    #[arg(long, default_value = "0")]
    pub alpha: ComplexArg,
}

#[derive(Debug, Args, Serialize)]
pub struct SnapshotCheck {
    #[command(flatten)]
    #[serde(flatten)]
    pub pair: SnapshotPair,
    /// Zero a with r/s = a/b, for the strong condition.
    #[arg(long, requires = "b")]
    pub a: Option<f64>,
    #[arg(long, requires = "a")]
    pub b: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct SnapshotReconstruct {
    #[command(flatten)]
    #[serde(flatten)]
    pub pair: SnapshotPair,
    /// `absolute`, `auto` (scan-informed) or `C,N`.
    #[arg(long, default_value = "absolute")]
    pub floor: String,
    /// Absolute floor in units of |Γ(α + n/2)|.
    #[arg(long, default_value_t = jnu_core::snapshot::DEFAULT_FLOOR)]
    pub absolute: f64,
    #[arg(long, default_value_t = jnu_core::snapshot::DEFAULT_TOLERANCE)]
    pub tolerance: f64,
    #[arg(long)]
    pub f_out: Option<PathBuf>,
    /// Known source, for the relative error.
    #[arg(long)]
    pub truth: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct SnapshotScan {
    #[arg(long)]
    pub r: f64,
    #[arg(long)]
    pub s: f64,
    #[arg(long, default_value = "0.5")]
    pub nu: ComplexArg,
    #[arg(long)]
    pub zmax: f64,
    #[arg(long, default_value = "0,1,2,3,4,5,6")]
    pub candidates: List<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct SnapshotWitness {
    #[arg(long)]
    pub r: f64,
    #[arg(long)]
    pub s: f64,
    #[arg(long, default_value_t = 0.5)]
    pub nu: f64,
    #[arg(long, default_value_t = 3)]
    pub dim: usize,
    #[arg(long, default_value_t = 16)]
    pub points: usize,
    /// Largest zero index searched.
    #[arg(long, default_value_t = 50)]
    pub bound: usize,
    #[arg(long)]
    pub f_out: Option<PathBuf>,
}
