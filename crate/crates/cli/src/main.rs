use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mapper_hotspot::clustering::{LinkageKind, Metric};
use mapper_hotspot::graph::{induced_attribute, AnnotatedGraph, VertexAttributeMap};
use mapper_hotspot::hotspot::{
    edge_gradient, run_detection, ContrastRule, EdgeGradientMap, HotspotConfig, SizeMode,
};
use mapper_hotspot::io::{self, ExportFormat};
use mapper_hotspot::lens::{eval_lens, LensFamily, LensSpec, SamplerConfig};
use mapper_hotspot::mapper::{build_mapper, MapperConfig};
use mapper_hotspot::search::{run_lens_search, ScoreCriterion, SearchConfig};
use mapper_hotspot::synthetic::{gen_grid_graph, GridGraphSpec, TwoCircles};
use mapper_hotspot::{Error, Result};

#[derive(Parser)]
#[command(
    name = "mapper-hotspot",
    version,
    about = "Mapper graphs and hotspot detection"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic dataset.
    Gen {
        #[command(subcommand)]
        dataset: Dataset,
    },
    /// Build a Mapper graph from a CSV point cloud.
    Mapper {
        #[command(flatten)]
        input: CloudArgs,
        /// l2_norm, std_dev, min_value, coordinate:<j>, or a lens JSON file.
        #[arg(long, default_value = "l2_norm")]
        lens: String,
        #[command(flatten)]
        mapper: MapperArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Find hotspots of an annotated graph.
    Detect {
        /// Graph JSON as written by `mapper` or `gen grid2d`.
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        detect: DetectArgs,
        /// Also write the edge-gradient dendrogram here.
        #[arg(long)]
        dendrogram: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random lens search.
    Search {
        #[command(flatten)]
        input: CloudArgs,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value = "linear")]
        family: LensFamily,
        #[arg(long, default_value_t = 0.0)]
        sparsity: f64,
        /// Quadratic monomials per lens; ceil(dim / 10) when omitted.
        #[arg(long)]
        quad_terms: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "max_heterogeneity")]
        score: ScoreCriterion,
        /// Number of best trials to print.
        #[arg(long, default_value_t = 10)]
        top: usize,
        #[command(flatten)]
        mapper: MapperArgs,
        #[command(flatten)]
        detect: DetectArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convert graph JSON to JSON or DOT.
    Export {
        #[arg(long)]
        graph: PathBuf,
        /// Hotspot report whose hotspots are outlined in DOT output.
        #[arg(long)]
        report: Option<PathBuf>,
        /// json or dot.
        #[arg(long, default_value = "dot")]
        format: ExportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Dataset {
    /// Two noisy concentric circles as CSV; the attribute is the minimum coordinate.
    TwoCircles {
        #[arg(long, default_value_t = 800)]
        n_points: usize,
        #[arg(long, default_value_t = 0.05)]
        noise: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// 2-D grid graph with nine planted sine regions.
    Grid2d(GridArgs),
    /// 3-D grid graph with a planted ball.
    Grid3d(GridArgs),
}

#[derive(Args)]
struct GridArgs {
    #[arg(long)]
    extra_edges: Option<usize>,
    #[arg(long)]
    noise_scale: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Ground-truth JSON output.
    #[arg(long)]
    truth: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CloudArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value = "attribute")]
    attribute_col: String,
}

#[derive(Args)]
struct MapperArgs {
    #[arg(long, default_value_t = 10)]
    intervals: usize,
    /// Overlap of consecutive intervals, in percent.
    #[arg(long, default_value_t = 20.0)]
    overlap: f64,
    #[arg(long, default_value = "euclidean")]
    metric: Metric,
    #[arg(long, default_value = "single")]
    linkage: LinkageKind,
    #[arg(long, default_value_t = 2)]
    clusters_per_interval: usize,
}

impl MapperArgs {
    fn config(&self) -> MapperConfig<f64> {
        MapperConfig {
            n_intervals: self.intervals,
            overlap_pct: self.overlap,
            linkage: self.linkage,
            clusters_per_interval: self.clusters_per_interval,
            metric: self.metric,
        }
    }
}

#[derive(Args)]
struct DetectArgs {
    /// Dendrogram cut level; suggested from the largest height gap when omitted.
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long)]
    sigma1_nodes: Option<usize>,
    #[arg(long)]
    sigma1_points: Option<usize>,
    /// Size-contrast threshold; one MAD of candidate sizes when omitted.
    #[arg(long)]
    sigma2: Option<f64>,
    #[arg(long, default_value = "nodes")]
    size_mode: SizeMode,
    #[arg(long, default_value = "signed")]
    contrast: ContrastRule,
}

impl DetectArgs {
    fn config(&self) -> HotspotConfig<f64> {
        let needs = |m: &[SizeMode]| m.contains(&self.size_mode);
        HotspotConfig {
            tau: self.tau,
            epsilon: self.epsilon,
            sigma1_nodes: self
                .sigma1_nodes
                .or(needs(&[SizeMode::Nodes, SizeMode::Both]).then_some(2)),
            sigma1_points: self
                .sigma1_points
                .or(needs(&[SizeMode::Points, SizeMode::Both]).then_some(5)),
            sigma2: self.sigma2,
            size_mode: self.size_mode,
            contrast: self.contrast,
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => io::write_file(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_lens(arg: &str) -> Result<LensSpec<f64>> {
    match arg {
        "l2_norm" => Ok(LensSpec::L2Norm),
        "std_dev" => Ok(LensSpec::StdDev),
        "min_value" => Ok(LensSpec::MinValue),
        _ => {
            if let Some(j) = arg.strip_prefix("coordinate:") {
                let j = j
                    .parse()
                    .map_err(|_| Error::Domain(format!("bad coordinate index '{j}'")))?;
                return Ok(LensSpec::Coordinate(j));
            }
            if arg.ends_with(".json") {
                return io::lens_from_json(&io::read_file(Path::new(arg))?);
            }
            Err(Error::Domain(format!("unknown lens '{arg}'")))
        }
    }
}

fn load_graph(path: &Path) -> Result<(AnnotatedGraph, VertexAttributeMap<f64>, EdgeGradientMap<f64>)> {
    io::graph_from_json(&io::read_file(path)?)
}

fn gen_grid(mut spec: GridGraphSpec, args: &GridArgs) -> Result<()> {
    if let Some(e) = args.extra_edges {
        spec.extra_edges = e;
    }
    if let Some(s) = args.noise_scale {
        spec.noise_scale = s;
    }
    if let Some(s) = args.seed {
        spec.seed = s;
    }
    let g = gen_grid_graph::<f64>(&spec)?;
    let a = g.a_hat();
    let grad = edge_gradient(&g.graph, &a);
    if let Some(path) = &args.truth {
        let hot: Vec<usize> = (0..g.graph.vertex_count())
            .filter(|&v| g.truth.hotspot_vertex_mask[v])
            .collect();
        let doc = serde_json::json!({
            "hotspot_vertices": hot,
            "region_count": g.truth.region_count(),
            "regions": g.truth.regions,
            "bridging_edges": g.truth.bridging_edges,
        });
        io::write_file(path, &format!("{doc:#}\n"))?;
    }
    emit(args.out.as_deref(), &io::graph_to_json(&g.graph, &a, &grad))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen { dataset } => match dataset {
            Dataset::TwoCircles {
                n_points,
                noise,
                seed,
                out,
            } => {
                let cloud = TwoCircles::new(n_points, noise, seed).generate::<f64>()?;
                emit(out.as_deref(), &io::point_cloud_to_csv(&cloud, "attribute"))
            }
            Dataset::Grid2d(args) => gen_grid(GridGraphSpec::grid2d(), &args),
            Dataset::Grid3d(args) => gen_grid(GridGraphSpec::grid3d(), &args),
        },
        Command::Mapper {
            input,
            lens,
            mapper,
            out,
        } => {
            let cloud = io::load_point_cloud_csv::<f64>(&input.input, &input.attribute_col)?;
            let values = eval_lens(&parse_lens(&lens)?, &cloud)?;
            let graph = build_mapper(&cloud, &values, &mapper.config())?;
            let a = induced_attribute(&cloud, &graph)?;
            let grad = edge_gradient(&graph, &a);
            emit(out.as_deref(), &io::graph_to_json(&graph, &a, &grad))
        }
        Command::Detect {
            graph,
            detect,
            dendrogram,
            out,
        } => {
            let (g, a, _) = load_graph(&graph)?;
            let det = run_detection(&g, &a, &detect.config())?;
            if let Some(path) = dendrogram {
                io::export_dendrogram(&det.dendrogram, &path)?;
            }
            emit(out.as_deref(), &io::report_to_json(&det.report))
        }
        Command::Search {
            input,
            trials,
            family,
            sparsity,
            quad_terms,
            seed,
            score,
            top,
            mapper,
            detect,
            out,
        } => {
            let cloud = io::load_point_cloud_csv::<f64>(&input.input, &input.attribute_col)?;
            let config = SearchConfig {
                trials,
                sampler: SamplerConfig {
                    family,
                    sparsity,
                    quad_terms,
                    seed,
                },
                mapper: mapper.config(),
                hotspot: detect.config(),
                master_seed: seed,
                score,
            };
            let results = run_lens_search(&cloud, &config)?;
            let shown = &results[..top.min(results.len())];
            emit(out.as_deref(), &io::trials_to_json(shown))
        }
        Command::Export {
            graph,
            report,
            format,
            out,
        } => {
            let (g, a, grad) = load_graph(&graph)?;
            let report = match report {
                Some(p) => Some(io::report_from_json::<f64>(&io::read_file(&p)?)?),
                None => None,
            };
            match out {
                Some(path) => io::export_graph(&g, &a, &grad, format, report.as_ref(), &path),
                None => {
                    let text = match format {
                        ExportFormat::Json => io::graph_to_json(&g, &a, &grad),
                        ExportFormat::Dot => io::graph_to_dot(&g, &a, &grad, report.as_ref()),
                    };
                    emit(None, &text)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_io() { 2 } else { 1 })
        }
    }
}
