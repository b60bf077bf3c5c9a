use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(name = "bottomk", version, about = "Mixing-time experiments for top to bottom-k shuffles")]
pub struct Cli {
    /// Directory for CSV/JSON outputs and the run manifest.
    #[arg(long, global = true, default_value = "bottomk-out")]
    pub out: std::path::PathBuf,

    /// Re-run a stored manifest and compare output digests.
    #[arg(long)]
    pub manifest: Option<std::path::PathBuf>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Clone, Debug, Subcommand, Serialize, Deserialize)]
#[serde(tag = "subcommand", content = "params", rename_all = "lowercase")]
pub enum Command {
    /// Exact distance profile and mixing time.
    Exact(ExactArgs),
    /// Eigenvalues of a symmetric walk.
    Spectrum(SpectrumArgs),
    /// Coupling-time Monte Carlo.
    Couple(CoupleArgs),
    /// Coupon-collector times.
    Collector(CollectorArgs),
    /// Monte Carlo lower bounds on the distance to uniform.
    Lowerbound(LowerboundArgs),
    /// Wilson eigenfunction parameters and lower bound.
    Wilson(WilsonArgs),
    /// Build, verify and evaluate a comparison flow.
    Flow(FlowArgs),
    /// Exact transfer inequalities for lazy and product walks.
    Transfer(TransferArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Exact(_) => "exact",
            Command::Spectrum(_) => "spectrum",
            Command::Couple(_) => "couple",
            Command::Collector(_) => "collector",
            Command::Lowerbound(_) => "lowerbound",
            Command::Wilson(_) => "wilson",
            Command::Flow(_) => "flow",
            Command::Transfer(_) => "transfer",
        }
    }

    pub fn seed(&self) -> u64 {
        match self {
            Command::Couple(a) => a.seed,
            Command::Collector(a) => a.seed,
            Command::Lowerbound(a) => a.seed,
            Command::Wilson(a) => a.seed,
            Command::Flow(a) => a.seed,
            _ => 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Walk {
    /// Top card to a uniform position in the bottom k.
    Q,
    /// Uniform card of the bottom k to the top.
    Reversal,
    /// Average of the walk and its reversal.
    Sym,
    /// Stays put with probability 1/2.
    Lazy,
    /// Random transposition.
    Rt,
    /// Symmetrized Rudvalis generators.
    Rudvalis,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetricArg {
    Tv,
    L2,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct ExactArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_enum, default_value = "q")]
    pub walk: Walk,
    #[arg(long, value_enum, default_value = "tv")]
    pub metric: MetricArg,
    #[arg(long, default_value_t = 100)]
    pub mmax: usize,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_enum, default_value = "sym")]
    pub walk: Walk,
    /// Allow n = 7.
    #[arg(long)]
    pub large: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KindArg {
    BottomToTop,
    TopInsert,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct CoupleArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_enum, default_value = "bottom-to-top")]
    pub kind: KindArg,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Step cap per trial; defaults to 50 n³.
    #[arg(long)]
    pub cap: Option<u64>,
    /// Probability of moving in the lazy thinning; 1 disables it.
    #[arg(long, default_value_t = 1.0)]
    pub lazy: f64,
    /// Steps at which to report P(T > m).
    #[arg(long, value_delimiter = ',')]
    pub tail: Vec<u64>,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct CollectorArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub j: usize,
    #[arg(long, default_value_t = 200)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Statistic {
    /// Probability that the bottom j labels were not all chosen.
    IncreasingBottom,
    /// Single-card block statistic.
    SingleCard,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct LowerboundArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_enum, default_value = "increasing-bottom")]
    pub statistic: Statistic,
    #[arg(long, default_value_t = 6)]
    pub j: usize,
    /// Number of steps.
    #[arg(long)]
    pub m: u64,
    #[arg(long, default_value_t = 0.5)]
    pub c: f64,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VariantArg {
    Derived,
    Printed,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct WilsonArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.5)]
    pub eps: f64,
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "derived")]
    pub variant: VariantArg,
    /// Newton iteration limit.
    #[arg(long, default_value_t = 100)]
    pub max_iter: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Builder {
    Odd,
    General,
    LargeK,
    Rudvalis,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Weights {
    Rescaled,
    Printed,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct FlowArgs {
    #[arg(long, value_enum)]
    pub builder: Builder,
    #[arg(long)]
    pub n: usize,
    /// Required except for `large-k`.
    #[arg(long)]
    pub k: Option<usize>,
    /// n − k for `large-k`.
    #[arg(long)]
    pub c: Option<usize>,
    #[arg(long, value_enum, default_value = "rescaled")]
    pub weights: Weights,
    /// Random functions for the Dirichlet comparison (n <= 8).
    #[arg(long, default_value_t = 0)]
    pub functions: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also write every path.
    #[arg(long)]
    pub paths: bool,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct TransferArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.5,0.9")]
    pub eps: Vec<f64>,
}
