use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use edgepath::bundling::ThresholdMode;
use edgepath::datasets::CubesVariant;
use edgepath::io::Format;
use edgepath::render::{Background, ColorMode};

/// Edge-path bundling, bundling quality metrics and rendering.
///
/// Output files default to the directory in `EDGEPATH_OUT_DIR` (or the
/// working directory) when `--out` is not given.
#[derive(Debug, Parser)]
#[command(name = "edgepath", version, args_override_self = true)]
pub struct Cli {
    /// Print a machine-readable JSON summary on stdout.
    #[arg(long, global = true)]
    pub json: bool,

    /// Flat `key = value` file whose keys mirror the long flags of the
    /// subcommand; flags given on the command line win [default: none].
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic benchmark graph in the edge-list format.
    Generate {
        #[command(subcommand)]
        kind: Generate,
    },
    /// Bundle a graph and write the bundled drawing as JSON.
    Bundle(BundleArgs),
    /// Write the straight-line drawing of a graph as JSON.
    Straight(StraightArgs),
    /// Convert a trail set (third-party bundler output) into a graph and a drawing.
    Import(ImportArgs),
    /// Compute ink, distortion and ambiguity of a drawing.
    Metrics(MetricsArgs),
    /// Render a drawing as SVG and optionally as a raster image.
    Render(RenderArgs),
    /// Compare several drawings of one graph against a baseline.
    Compare(CompareArgs),
}

#[derive(Debug, Subcommand)]
pub enum Generate {
    /// Four squares of vertices joined pairwise (variants 1R-4R).
    Cubes {
        /// Layout variant: 1R, 2R, 3R or 4R.
        #[arg(long, default_value = "1R")]
        variant: CubesVariant,
        /// Number of vertices, divisible by 4.
        #[arg(long, default_value_t = 100)]
        n: usize,
        /// Side length of each square.
        #[arg(long, default_value_t = 1.0)]
        side: f64,
        /// Extra random edges per square [default: an eighth of its vertices].
        #[arg(long)]
        extra_edges: Option<usize>,
        /// Orient edges; half of the inter-square edges run left to right.
        #[arg(long)]
        directed: bool,
        /// Random seed; equal seeds give identical files.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output edge list [default: cubes.txt in the output directory].
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Random perfect matching on uniform vertices.
    Noise {
        /// Number of vertices, even.
        #[arg(long, default_value_t = 1000)]
        n: usize,
        /// Random seed; equal seeds give identical files.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output edge list [default: noise.txt in the output directory].
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Closest vertex pairs among uniform vertices.
    Geometric {
        /// Number of vertices.
        #[arg(long, default_value_t = 1700)]
        n: usize,
        /// Number of edges.
        #[arg(long, default_value_t = 6500)]
        edges: usize,
        /// Orient each edge at random.
        #[arg(long)]
        directed: bool,
        /// Random seed; equal seeds give identical files.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output edge list [default: geometric.txt in the output directory].
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Uniformly random vertex pairs among uniform vertices.
    Uniform {
        /// Number of vertices.
        #[arg(long, default_value_t = 500)]
        n: usize,
        /// Number of edges.
        #[arg(long, default_value_t = 2000)]
        edges: usize,
        /// Orient each edge at random.
        #[arg(long)]
        directed: bool,
        /// Random seed; equal seeds give identical files.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output edge list [default: uniform.txt in the output directory].
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Directedness {
    /// Use the input file's header.
    Auto,
    On,
    Off,
}

#[derive(Debug, Args)]
pub struct GraphInput {
    /// Graph file.
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,
    /// Input format: edge-list or trail-set.
    #[arg(long, default_value = "edge-list")]
    pub format: Format,
    /// Treat the graph as directed, undirected, or as declared in the file.
    #[arg(long, value_enum, default_value_t = Directedness::Auto)]
    pub directed: Directedness,
}

#[derive(Debug, Args)]
pub struct BundleArgs {
    #[command(flatten)]
    pub graph: GraphInput,
    /// Maximum distortion: a path may be at most k times the edge length.
    #[arg(long, default_value_t = 2.0)]
    pub k: f64,
    /// Edge weight exponent: paths are shortest under length^d.
    #[arg(long, default_value_t = 2.0)]
    pub d: f64,
    /// Smoothing factor; n-1 rounds of midpoint insertion.
    #[arg(long, default_value_t = 2)]
    pub smoothing: u32,
    /// Curve samples per spline segment.
    #[arg(long, default_value_t = 8)]
    pub samples: usize,
    /// Quantity the k threshold applies to: geometry or weight.
    #[arg(long, default_value = "geometry")]
    pub threshold_on: ThresholdMode,
    /// Run N times and report mean and standard deviation per phase.
    #[arg(long, default_value_t = 1)]
    pub repeat: usize,
    /// Output drawing [default: bundled.json in the output directory].
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StraightArgs {
    #[command(flatten)]
    pub graph: GraphInput,
    /// Output drawing [default: straight.json in the output directory].
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ImportArgs {
    /// Trail-set file: one polyline per line.
    #[arg(long, value_name = "PATH")]
    pub trails: PathBuf,
    /// Treat each trail as directed from its first to its last point.
    #[arg(long)]
    pub directed: bool,
    /// Edge-list output [default: imported.txt in the output directory].
    #[arg(long, value_name = "PATH")]
    pub graph_out: Option<PathBuf>,
    /// Drawing output [default: imported.json in the output directory].
    #[arg(long, value_name = "PATH")]
    pub drawing_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RasterFlags {
    /// Image width in pixels; height follows the aspect ratio.
    #[arg(long, default_value_t = 1600)]
    pub width: usize,
    #[arg(long, default_value_t = 1.0)]
    pub line_width: f64,
    #[arg(long, default_value_t = 4.0)]
    pub vertex_diameter: f64,
}

#[derive(Debug, Args)]
pub struct MetricFlags {
    #[command(flatten)]
    pub raster: RasterFlags,
    /// Gray value at which a pixel counts as inked.
    #[arg(long, default_value_t = 1)]
    pub gray_threshold: u8,
    /// Crossing angle below which two edges are confusable, in degrees.
    #[arg(long, default_value_t = 7.5)]
    pub theta: f64,
    /// Hop thresholds, as `a..b` or a comma list.
    #[arg(long, default_value = "1..5", value_parser = parse_deltas)]
    pub delta: Deltas,
    /// Ambiguity grid cell size in pixels.
    #[arg(long, default_value_t = 8)]
    pub cell_px: usize,
    /// Sliding window side in cells (odd).
    #[arg(long, default_value_t = 3)]
    pub window: usize,
    /// Proximity threshold in pixels; overrides --window [default: one cell].
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Edges compared per window before truncation.
    #[arg(long, default_value_t = 512)]
    pub max_window_edges: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Deltas(pub Vec<usize>);

fn parse_deltas(s: &str) -> Result<Deltas, String> {
    let bad = || format!("invalid delta range `{s}`");
    let values: Vec<usize> = if let Some((a, b)) = s.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        (a..=b).collect()
    } else {
        s.split(',')
            .map(|v| v.trim().parse().map_err(|_| bad()))
            .collect::<Result<_, _>>()?
    };
    if values.is_empty() {
        return Err(bad());
    }
    Ok(Deltas(values))
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    /// Drawing to evaluate (JSON).
    #[arg(long, value_name = "PATH")]
    pub drawing: PathBuf,
    /// Baseline drawing [default: straight-line drawing of the graph].
    #[arg(long, value_name = "PATH")]
    pub baseline: Option<PathBuf>,
    /// Graph the drawing must match [default: taken from the drawing].
    #[arg(long, value_name = "PATH")]
    pub graph: Option<PathBuf>,
    #[command(flatten)]
    pub metrics: MetricFlags,
    /// Also write the ambiguity heatmap (.pgm or .png) [default: not written].
    #[arg(long, value_name = "PATH")]
    pub heatmap: Option<PathBuf>,
    /// Run N times and report mean and standard deviation per phase.
    #[arg(long, default_value_t = 1)]
    pub repeat: usize,
    /// Output report [default: metrics.json in the output directory].
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[arg(long, value_name = "PATH")]
    pub drawing: PathBuf,
    /// Colouring: plain, angle or distortion.
    #[arg(long, default_value = "plain")]
    pub mode: ColorMode,
    /// Background: white or black.
    #[arg(long, default_value = "white")]
    pub background: Background,
    #[command(flatten)]
    pub raster: RasterFlags,
    /// Also write a grayscale raster (.pgm or .png) [default: not written].
    #[arg(long, value_name = "PATH")]
    pub raster_out: Option<PathBuf>,
    /// Output SVG [default: drawing.svg in the output directory].
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Straight-line (or other reference) drawing.
    #[arg(long, value_name = "PATH")]
    pub baseline: PathBuf,
    /// Graph the drawings must match [default: taken from the baseline].
    #[arg(long, value_name = "PATH")]
    pub graph: Option<PathBuf>,
    /// Drawing to compare; repeat for several.
    #[arg(long = "drawing", value_name = "PATH", required = true)]
    pub drawings: Vec<PathBuf>,
    /// Row label per drawing, in order [default: file stem].
    #[arg(long = "label")]
    pub labels: Vec<String>,
    #[command(flatten)]
    pub metrics: MetricFlags,
    /// Output directory for the table, per-drawing metrics and heatmaps
    /// [default: compare/ in the output directory].
    #[arg(long, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
}
