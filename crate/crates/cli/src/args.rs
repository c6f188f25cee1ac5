use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use speiser_lab::theorem1::DEFAULT_SEED;

/// Generators, solvers and reports for Speiser graphs and their surfaces.
///
/// Exit status: 0 on success, 2 on usage errors (bad flags, missing input
/// files), 3 when a numeric solver did not converge (its diagnostics are
/// still written), 1 on other failures. SPEISER_LAB_THREADS caps the worker
/// thread count.
#[derive(Debug, Parser)]
#[command(name = "speiser-lab", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a graph and write it in the JSON graph format.
    #[command(subcommand)]
    Gen(Gen),
    /// Run a solver or estimator and write a JSON (or SVG) report.
    #[command(subcommand)]
    Analyze(Analyze),
    /// Run both legs of the end-to-end construction.
    Theorem1(Theorem1Args),
}

#[derive(Debug, Args)]
pub struct Output {
    /// Output file; standard output when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Input {
    /// Graph in the JSON graph format.
    #[arg(short, long)]
    pub graph: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Gen {
    /// Cubic bipartite graph with octagonal faces, ball of radius depth + 1.
    Octagonal {
        #[arg(long)]
        depth: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Octagonal graph with its first cut sets stretched into long paths.
    Gamma {
        #[arg(long)]
        depth: usize,
        /// Odd path lengths, comma separated.
        #[arg(long, value_delimiter = ',', conflicts_with = "paper_terms")]
        schedule: Vec<u64>,
        /// Use the first N terms of the doubly exponential schedule (N <= 3).
        #[arg(long)]
        paper_terms: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Triangulation by edge midpoints and face centres.
    Lambda {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        out: Output,
    },
    /// Glue a cylindrical grid of the given height into every face.
    Extend {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        grid_depth: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Split every triangle into four through the edge midpoints.
    Subdivide4 {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        out: Output,
    },
    /// Planar dual.
    Dual {
        #[command(flatten)]
        input: Input,
        /// Drop frontier faces instead of keeping them as dual vertices.
        #[arg(long)]
        drop_frontier_faces: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Triangulation with every vertex of degree q, grown layer by layer.
    RegularTriangulation {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        layers: usize,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Json,
    Svg,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Boundary {
    /// Euclidean packing with boundary radii 1.
    Euclidean,
    /// Maximal packing in the unit disk.
    Maximal,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Family {
    /// Hexagonal lattice balls.
    Hex,
    /// Balls of the degree-q triangulation (see --q).
    Regular,
}

#[derive(Debug, Subcommand)]
pub enum Analyze {
    /// Vertex extremal length of annuli S(inner)..S(outer) and its trend.
    Vel {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 0)]
        root: usize,
        /// Annuli as inner:outer pairs, comma separated (e.g. 1:2,2:4).
        #[arg(long, value_delimiter = ',', required = true)]
        annuli: Vec<String>,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = 3000)]
        max_rounds: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Effective resistance from the root to S(n).
    Resistance {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 0)]
        root: usize,
        /// Radii as a list (1,2,4) or range (1..16); defaults to a
        /// selection up to --n-max.
        #[arg(long)]
        radii: Option<String>,
        #[arg(long, default_value_t = 16)]
        n_max: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Partial sums of inverse cut-set sizes.
    NashWilliams {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 0)]
        root: usize,
        #[arg(long)]
        n_max: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Glue grids into a Speiser graph and test recurrence.
    Doyle {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        grid_depth: usize,
        #[arg(long, default_value_t = 0)]
        root: usize,
        #[arg(long)]
        n_max: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Root radii of maximal packings of growing balls.
    RatioTrend {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, default_value_t = 8)]
        q: usize,
        /// Ball radii as a list or range.
        #[arg(long, default_value = "2..8")]
        n: String,
        #[command(flatten)]
        out: Output,
    },
    /// Circle packing of a disk triangulation.
    Pack {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Boundary::Euclidean)]
        boundary: Boundary,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Draw the nerve in SVG output.
        #[arg(long)]
        edges: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Monte Carlo fatness of a union of disks.
    Fatness {
        /// Disk as x,y,r; repeat for a union.
        #[arg(long = "disk", required = true, allow_hyphen_values = true)]
        disks: Vec<String>,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 8)]
        radii: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Args)]
pub struct Theorem1Args {
    /// `default` or a JSON config file; missing keys take default values.
    #[arg(long, default_value = "default")]
    pub config: String,
    /// Overrides the seed recorded in the config.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Also draw the maximal packing of a small degree-8 patch here.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[command(flatten)]
    pub out: Output,
}
