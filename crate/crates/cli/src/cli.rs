use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use frenet_core::tangent::ToleranceMode;

use crate::config::{RunConfig, ToleranceOverrides};

#[derive(Debug, Parser)]
#[command(name = "frenet-kit", version, about = "Frenet frames, flag simplices and tangent frames of sampled data")]
pub struct Cli {
    /// RunConfig JSON; flags given on the command line override it.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Seed for everything randomized.
    #[arg(long, global = true, env = "FRENET_KIT_SEED", default_value_t = 0)]
    pub seed: u64,

    /// More log output (-v info, -vv debug). `RUST_LOG` takes precedence.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(flatten)]
    pub tuning: Tuning,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Default)]
pub struct Tuning {
    #[arg(long, global = true)]
    pub window: Option<usize>,
    #[arg(long, global = true)]
    pub min_tail: Option<usize>,
    #[arg(long, global = true)]
    pub min_points: Option<usize>,
    #[arg(long, global = true)]
    pub angle_tol: Option<f64>,
    #[arg(long, global = true)]
    pub cluster_angle: Option<f64>,
    #[arg(long, global = true)]
    pub divergence_angle: Option<f64>,
    #[arg(long, global = true)]
    pub floor: Option<f64>,
    #[arg(long, global = true)]
    pub mem_tol: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub mem_mode: Option<MemMode>,
    #[arg(long, global = true)]
    pub tol_orth: Option<f64>,
    #[arg(long, global = true)]
    pub tol_bary: Option<f64>,
    #[arg(long, global = true)]
    pub tol_aff: Option<f64>,
    #[arg(long, global = true)]
    pub rank_tol: Option<f64>,
    /// Multiplier ladder for ratio tables.
    #[arg(long, global = true, value_delimiter = ',')]
    pub multipliers: Option<Vec<u64>>,
}

impl Tuning {
    pub fn to_config(&self) -> RunConfig {
        RunConfig {
            tolerances: ToleranceOverrides {
                tol_orth: self.tol_orth,
                tol_bary: self.tol_bary,
                tol_aff: self.tol_aff,
                rank_tol: self.rank_tol,
                mem_tol: self.mem_tol,
                angle_tol: self.angle_tol,
                cluster_angle: self.cluster_angle,
                divergence_angle: self.divergence_angle,
                floor: self.floor,
            },
            window: self.window,
            min_tail: self.min_tail,
            min_points: self.min_points,
            multipliers: self.multipliers.clone(),
            mem_mode: self.mem_mode.map(Into::into),
            outputs: Default::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MemMode {
    Absolute,
    Relative,
}

impl From<MemMode> for ToleranceMode {
    fn from(m: MemMode) -> Self {
        match m {
            MemMode::Absolute => ToleranceMode::Absolute,
            MemMode::Relative => ToleranceMode::Relative,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Curve sampling.
    #[command(subcommand)]
    Curve(CurveCommand),
    /// Frame estimation.
    #[command(subcommand)]
    Frame(FrameCommand),
    /// Tangent frames, outgoing verdicts and witnesses of a sampled set.
    Tangents(TangentsArgs),
    /// Flag simplex operations.
    #[command(subcommand)]
    Flags(FlagsCommand),
    /// Writes a builtin sample cloud.
    Cloud(CloudArgs),
}

#[derive(Debug, Subcommand)]
pub enum CurveCommand {
    /// Samples a builtin curve along a geometric parameter schedule.
    Sample(SampleArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CurveKind {
    Helix,
    Cubic,
    Sin2,
    Polynomial,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum PhaseArg {
    Plain,
    Peaks,
    Troughs,
    Mixed,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, value_enum)]
    pub kind: CurveKind,
    /// Parameter snapping for `sin2`.
    #[arg(long, value_enum, default_value = "plain")]
    pub phase: PhaseArg,
    /// Polynomial coefficients: rows separated by `;`, powers of t by `,`.
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: Option<String>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub t0: f64,
    #[arg(long, default_value_t = 0.25, allow_hyphen_values = true)]
    pub t_start: f64,
    #[arg(long, default_value_t = 0.5)]
    pub ratio: f64,
    #[arg(long, default_value_t = 30)]
    pub count: usize,
    /// Output PointSequence JSON (stdout if omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the analytic derivatives at t0 (levels 1..=dim) as JSON.
    #[arg(long, value_name = "PATH")]
    pub derivatives_out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum FrameCommand {
    /// Estimates the Frenet frame of a point sequence.
    Estimate(EstimateArgs),
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// PointSequence JSON.
    #[arg(long)]
    pub input: PathBuf,
    /// Levels to estimate (default: the ambient dimension).
    #[arg(long)]
    pub k_max: Option<usize>,
    /// Report JSON (stdout if omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Angle-vs-index CSV; one file per level, named `<stem>.level<j>.<ext>`.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Derivative table JSON (array of vectors) to compare against.
    #[arg(long, value_name = "PATH")]
    pub compare_classical: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TangentsArgs {
    /// SampledSet JSON.
    #[arg(long)]
    pub input: PathBuf,
    /// Report JSON (stdout if omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Build witness pairs and ratio tables for every outgoing frame.
    #[arg(long)]
    pub witness: bool,
    /// Ratio tables as CSV, one file per witness, named `<stem>.b<base>_r<record>_k<k>.<ext>`.
    #[arg(long)]
    pub ratio_csv: Option<PathBuf>,
    /// Only points within this distance of a base are considered.
    #[arg(long)]
    pub radius: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum FlagsCommand {
    /// Intersects two flag simplices on a shared base and frame.
    Intersect(IntersectArgs),
}

#[derive(Debug, Args)]
pub struct IntersectArgs {
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    pub lambda: Vec<f64>,
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    pub mu: Vec<f64>,
    /// Ambient dimension (default: the number of levels).
    #[arg(long)]
    pub dim: Option<usize>,
    /// Base point (default: the origin).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub base: Option<Vec<f64>>,
    /// Frame JSON (array of vectors); default is the canonical frame.
    #[arg(long, conflicts_with = "random_frame")]
    pub frame: Option<PathBuf>,
    /// Draw a random frame from the seed.
    #[arg(long)]
    pub random_frame: bool,
    /// Recompute the intersection by ray casting and compare.
    #[arg(long)]
    pub verify: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CloudKind {
    /// Origin, axis points (1/n, 0) and parabola points (1/n, 1/n^2).
    AxisParabola,
    /// Origin and (t, t^2) at t = 2^-i.
    ParabolaArc,
    /// Unit segment accumulating at both ends.
    Segment,
    /// Polygon boundary accumulating at vertices and edge midpoints.
    Polygon,
}

#[derive(Debug, Args)]
pub struct CloudArgs {
    #[arg(long, value_enum)]
    pub kind: CloudKind,
    /// Point count for `axis-parabola`.
    #[arg(long, default_value_t = 200)]
    pub count: usize,
    /// Geometric depth for the other kinds.
    #[arg(long, default_value_t = 22)]
    pub depth: usize,
    /// Polygon vertices `x,y;x,y;...` (default: the unit triangle).
    #[arg(long, allow_hyphen_values = true)]
    pub vertices: Option<String>,
    /// Half-width of uniform noise added to every coordinate (seeded).
    #[arg(long, default_value_t = 0.0)]
    pub jitter: f64,
    /// Drop the labeled bases so they are detected.
    #[arg(long)]
    pub no_bases: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
