//! Command-line arguments. Every command doubles as a persisted experiment
//! spec: it serializes to JSON, and `rerun --spec` reads it back.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Survival function of a supremum on a grid of levels.
    Tail(TailArgs),
    /// Density of the stable subordinator.
    Density(DensityArgs),
    /// Heat content curve on a log-spaced time grid.
    Heat(HeatArgs),
    /// Coefficients of the small-time expansion.
    Expand(ExpandArgs),
    /// Least-squares extraction of expansion coefficients from a curve.
    Fit(FitArgs),
    /// Runs the acceptance criteria.
    Validate(ValidateArgs),
    /// Re-executes a saved experiment spec.
    #[serde(skip)]
    Rerun(RerunArgs),
}

impl Command {
    pub fn seed(&self) -> Option<u64> {
        match self {
            Self::Heat(a) => Some(a.mc.seed),
            Self::Expand(a) => Some(a.mc.seed),
            Self::Fit(a) => Some(a.mc.seed),
            Self::Validate(a) => Some(a.seed),
            _ => None,
        }
    }

    pub fn output(&self) -> Option<&OutputArgs> {
        match self {
            Self::Tail(a) => Some(&a.output),
            Self::Density(a) => Some(&a.output),
            Self::Heat(a) => Some(&a.output),
            Self::Expand(a) => Some(&a.output),
            Self::Fit(a) => Some(&a.output),
            Self::Validate(a) => Some(&a.output),
            Self::Rerun(_) => None,
        }
    }

    pub fn output_mut(&mut self) -> Option<&mut OutputArgs> {
        match self {
            Self::Tail(a) => Some(&mut a.output),
            Self::Density(a) => Some(&mut a.output),
            Self::Heat(a) => Some(&mut a.output),
            Self::Expand(a) => Some(&mut a.output),
            Self::Fit(a) => Some(&mut a.output),
            Self::Validate(a) => Some(&mut a.output),
            Self::Rerun(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    /// Output format (the default depends on the command).
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Also write this experiment's spec as JSON.
    #[arg(long)]
    #[serde(skip)]
    pub save_spec: Option<PathBuf>,
}

/// Closed interval bounds written `a,b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pair(pub f64, pub f64);

impl FromStr for Pair {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once(',').ok_or_else(|| format!("expected 'a,b', got '{s}'"))?;
        let parse = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("'{x}': {e}"));
        Ok(Pair(parse(a)?, parse(b)?))
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.0, self.1)
    }
}

/// Monte Carlo budget shared by several commands.
#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct McArgs {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 10_000)]
    pub paths: u64,
    /// Skeleton steps on the unit time interval.
    #[arg(long, default_value_t = 256)]
    pub steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailKind {
    /// Brownian motion, erfc(u/2).
    Bm,
    /// Cauchy process, from Darling's density.
    CauchySup,
    /// Brownian motion up to the subordinator at time 1.
    SkbmSup,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct TailArgs {
    #[arg(long, value_enum)]
    pub kind: TailKind,
    /// Stability index (skbm-sup only).
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Levels; a log grid from --u-min to --u-max when absent.
    #[arg(long, value_delimiter = ',')]
    pub u: Vec<f64>,
    #[arg(long, default_value_t = 0.01)]
    pub u_min: f64,
    #[arg(long, default_value_t = 100.0)]
    pub u_max: f64,
    #[arg(long, default_value_t = 50)]
    pub points: usize,
    /// Evaluate the alpha = 1 subordinate tail by quadrature instead of the arctan law.
    #[arg(long)]
    pub no_fast_path: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct DensityArgs {
    #[arg(long)]
    pub alpha: f64,
    /// Subordinator time.
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    #[arg(long, value_delimiter = ',')]
    pub x: Vec<f64>,
    #[arg(long, default_value_t = 0.01)]
    pub x_min: f64,
    #[arg(long, default_value_t = 100.0)]
    pub x_max: f64,
    #[arg(long, default_value_t = 50)]
    pub points: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProcessArg {
    /// Killed subordinate process.
    Ksbm,
    /// Subordinate killed process.
    Skbm,
    /// Both, on shared paths.
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HeatMethod {
    Series,
    Mc,
    Reduction,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct HeatArgs {
    #[arg(long, value_enum)]
    pub process: ProcessArg,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value = "0,1")]
    pub interval: Pair,
    #[arg(long, value_enum, default_value_t = HeatMethod::Series)]
    pub method: HeatMethod,
    #[arg(long, default_value_t = 1e-4)]
    pub t_min: f64,
    #[arg(long, default_value_t = 1e-1)]
    pub t_max: f64,
    #[arg(long, default_value_t = 7)]
    pub points: usize,
    /// Truncate the eigenvalue series after this many terms.
    #[arg(long)]
    pub terms: Option<usize>,
    /// Starting-point strata for the per-path diagnostics.
    #[arg(long, default_value_t = 64)]
    pub strata: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub mc: McArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ExpandArgs {
    #[arg(long, value_enum)]
    pub process: ProcessArg,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value = "0,1")]
    pub interval: Pair,
    /// Use the theorem constants (the default).
    #[arg(long)]
    pub theorem: bool,
    /// Also report the third coefficient read off the eigenvalue series (skbm).
    #[arg(long)]
    pub spectral: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub mc: McArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisArg {
    /// t^(1/alpha)
    Power,
    /// t ln(1/t)
    Tlog,
    /// t
    Linear,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct FitArgs {
    #[arg(long, value_enum)]
    pub process: ProcessArg,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value = "0,1")]
    pub interval: Pair,
    /// Heat curve CSV written by `heat`.
    #[arg(long, conflicts_with = "synthetic")]
    pub input: Option<PathBuf>,
    /// Fit data generated from the theorem expansion.
    #[arg(long)]
    pub synthetic: bool,
    /// Basis terms; defaults to power,linear (tlog,linear for alpha = 1).
    #[arg(long, value_enum, value_delimiter = ',')]
    pub basis: Vec<BasisArg>,
    #[arg(long, default_value = "1e-6,1e-3")]
    pub window: Pair,
    /// Points of the synthetic curve.
    #[arg(long, default_value_t = 40)]
    pub points: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub mc: McArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteArg {
    Fast,
    Full,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct ValidateArgs {
    #[arg(long, value_enum, default_value_t = SuiteArg::Fast)]
    pub suite: SuiteArg,
    /// Criteria to run, e.g. A1,A4; all when absent.
    #[arg(long, value_delimiter = ',')]
    pub only: Vec<String>,
    /// Offset added to the arctan fast path (mutation test hook).
    #[arg(long, default_value_t = 0.0, hide = true)]
    pub tamper: f64,
    #[arg(long, default_value_t = 20_240_601)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct RerunArgs {
    /// Spec file written by --save-spec.
    #[arg(long)]
    pub spec: PathBuf,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
