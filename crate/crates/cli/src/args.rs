use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "denomlab",
    version,
    about = "Smallest denominators, Farey fractions and their limit laws"
)]
pub struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "DENOMLAB_THREADS")]
    pub threads: Option<usize>,

    /// Output format of the main result.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write the main result to this file instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,

    /// Also write an SVG chart to this file.
    #[arg(long, global = true, value_name = "FILE")]
    pub svg: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Smallest denominator of a rational point in x + delta * A.
    Qmin(QminArgs),
    /// Enumerate or count the Farey fractions of level Q.
    Farey(FareyArgs),
    /// Evaluate H, eta or M.
    Analytic(AnalyticArgs),
    /// Run a statistical experiment.
    Experiment {
        #[command(subcommand)]
        kind: ExperimentKind,
    },
    /// Quantiles of the rescaled minimal resonance order.
    Resonance(ResonanceArgs),
}

#[derive(Debug, Args)]
pub struct QminArgs {
    /// Base point, comma separated (fractions or decimals).
    #[arg(long, allow_hyphen_values = true)]
    pub x: String,
    /// Scale factor.
    #[arg(long)]
    pub delta: String,
    /// Region A, e.g. `interval:0,1:co`, `box:0,1;0,1`, `ball:1/2:l2:c`.
    #[arg(long)]
    pub region: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Csv,
}

#[derive(Debug, Args)]
pub struct FareyArgs {
    /// Dimension.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Level; the largest denominator is floor(Q).
    #[arg(long = "Q")]
    pub q: String,
    /// Print only the exact count and its ratio to sigma_Q.
    #[arg(long)]
    pub count_only: bool,
    /// Listing format.
    #[arg(long, value_enum, default_value = "csv")]
    pub emit: Emit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AnalyticFn {
    #[value(name = "H")]
    Hall,
    #[value(name = "eta")]
    Eta,
    #[value(name = "M")]
    Moment,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MomentMethodArg {
    Closed,
    Quad,
}

#[derive(Debug, Args)]
pub struct AnalyticArgs {
    /// Function to evaluate.
    #[arg(long = "fn", value_enum)]
    pub function: AnalyticFn,
    /// Argument: a real number, or `a+bi` for M.
    #[arg(long, allow_hyphen_values = true)]
    pub at: String,
    /// Evaluation route for M.
    #[arg(long, value_enum)]
    pub method: Option<MomentMethodArg>,
}

#[derive(Debug, Subcommand)]
pub enum ExperimentKind {
    /// Survival function of the rescaled smallest denominator.
    QminDist(PlanArgs),
    /// Moment of the rescaled smallest denominator.
    QminMoment(PlanArgs),
    /// Number of Farey points in a randomly placed region.
    Void(PlanArgs),
    /// Farey points per cell of a grid of cubes.
    Pigeonhole(PlanArgs),
    /// Moment of the rescaled distance to the Farey fractions.
    DistMoment(PlanArgs),
}

/// Plan fields; flags override values read from `--plan`.
#[derive(Debug, Args)]
pub struct PlanArgs {
    /// JSON plan: a file path or an inline object.
    #[arg(long, value_name = "FILE|JSON")]
    pub plan: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    /// `continuous-mc` or `grid-discrete`.
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long)]
    pub delta: Option<String>,
    /// Grid size.
    #[arg(long = "N")]
    pub grid_n: Option<u64>,
    /// Grid offset, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<String>,
    #[arg(long)]
    pub region: Option<String>,
    /// Sampling domain (interval or box inside the unit cube).
    #[arg(long = "D")]
    pub domain: Option<String>,
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Grid constant c in the condition c/delta <= N.
    #[arg(long)]
    pub c: Option<String>,
    /// Farey level.
    #[arg(long = "Q")]
    pub level: Option<String>,
    /// Void size or cell size in units of sigma_Q^(-1/n).
    #[arg(long)]
    pub s: Option<f64>,
    /// Void size as a threshold for the rescaled smallest denominator.
    #[arg(long = "L")]
    pub l: Option<f64>,
    /// Exact cell side.
    #[arg(long)]
    pub side: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    /// `l2`, `sup` or `l1`.
    #[arg(long)]
    pub norm: Option<String>,
    /// Thresholds L for the survival table, comma separated.
    #[arg(long = "L-grid")]
    pub l_grid: Option<String>,
    /// Histogram bins of the SVG chart.
    #[arg(long, default_value_t = 40)]
    pub bins: usize,
}

#[derive(Debug, Args)]
pub struct ResonanceArgs {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Thresholds rho, comma separated.
    #[arg(long)]
    pub rho: String,
    #[arg(long, default_value_t = 10_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Histogram bins of the SVG chart.
    #[arg(long, default_value_t = 40)]
    pub bins: usize,
}
