mod args;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use speiser_lab::fatness::{self, Disk, PlanarSet};
use speiser_lab::graph::{self, json as gjson, DualOptions};
use speiser_lab::packing::{self, BoundaryCondition};
use speiser_lab::refinement::subdivide4;
use speiser_lab::speiser::{self, GrowthSchedule};
use speiser_lab::theorem1::{self, Theorem1Config};
use speiser_lab::vel::{self, SolverOptions};
use speiser_lab::{lattice, walk, RotationGraph};

use args::{Analyze, Boundary, Cli, Command, Family, Format, Gen, Output, Theorem1Args};

const THREADS_VAR: &str = "SPEISER_LAB_THREADS";

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] speiser_lab::Error),
    /// The report was written, but a solver stopped early.
    #[error("{0}")]
    NotConverged(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::NotConverged(_) | CliError::Core(speiser_lab::Error::NoConvergence { .. }) => 3,
            CliError::Core(_) => 1,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn check_input(path: &Path) -> Result<()> {
    if path.is_file() {
        Ok(())
    } else {
        Err(CliError::Usage(format!("input file {} does not exist", path.display())))
    }
}

fn check_output(out: &Option<PathBuf>) -> Result<()> {
    let Some(p) = out else { return Ok(()) };
    let parent = p.parent().filter(|d| !d.as_os_str().is_empty());
    match parent {
        Some(d) if !d.is_dir() => Err(CliError::Usage(format!(
            "output directory {} does not exist",
            d.display()
        ))),
        _ => Ok(()),
    }
}

fn write_text(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(speiser_lab::Error::from)?,
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(speiser_lab::Error::from)?,
    }
    Ok(())
}

fn write_json<T: Serialize>(out: &Option<PathBuf>, value: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value).map_err(speiser_lab::Error::from)?;
    s.push('\n');
    write_text(out, &s)
}

fn read_graph(path: &Path) -> Result<RotationGraph> {
    Ok(gjson::read_file(path)?)
}

fn write_graph(out: &Output, g: &RotationGraph) -> Result<()> {
    let mut s = gjson::to_string(g);
    if !s.ends_with('\n') {
        s.push('\n');
    }
    write_text(&out.output, &s)
}

/// `1,2,5` or `2..8` (inclusive).
fn parse_list(s: &str) -> Result<Vec<usize>> {
    let bad = || CliError::Usage(format!("cannot parse list {s:?}"));
    if let Some((a, b)) = s.split_once("..") {
        let (a, b): (usize, usize) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    s.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect()
}

fn parse_annulus(s: &str) -> Result<(usize, usize)> {
    let bad = || CliError::Usage(format!("annulus {s:?} is not inner:outer"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn parse_disk(s: &str) -> Result<Disk> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("disk {s:?} is not x,y,r")))?;
    match parts[..] {
        [x, y, r] => Ok(Disk::new(x, y, r)),
        _ => Err(CliError::Usage(format!("disk {s:?} is not x,y,r"))),
    }
}

fn run_gen(cmd: Gen) -> Result<()> {
    match cmd {
        Gen::Octagonal { depth, out } => {
            check_output(&out.output)?;
            write_graph(&out, &speiser::build_octagonal_speiser(depth)?)
        }
        Gen::Gamma {
            depth,
            schedule,
            paper_terms,
            out,
        } => {
            check_output(&out.output)?;
            let schedule = match paper_terms {
                Some(n) => GrowthSchedule::paper(n)?,
                None if schedule.is_empty() => {
                    return Err(CliError::Usage("give --schedule or --paper-terms".into()))
                }
                None => GrowthSchedule::custom(schedule)?,
            };
            write_graph(&out, &speiser::build_gamma(depth, &schedule)?)
        }
        Gen::Lambda { input, out } => {
            check_input(&input.graph)?;
            check_output(&out.output)?;
            write_graph(&out, &speiser::lambda_triangulation(&read_graph(&input.graph)?)?)
        }
        Gen::Extend { input, grid_depth, out } => {
            check_input(&input.graph)?;
            check_output(&out.output)?;
            let ext = speiser::extend_speiser(&read_graph(&input.graph)?, grid_depth)?;
            write_graph(&out, &ext.graph)
        }
        Gen::Subdivide4 { input, out } => {
            check_input(&input.graph)?;
            check_output(&out.output)?;
            write_graph(&out, &subdivide4(&read_graph(&input.graph)?)?.0)
        }
        Gen::Dual {
            input,
            drop_frontier_faces,
            out,
        } => {
            check_input(&input.graph)?;
            check_output(&out.output)?;
            let g = read_graph(&input.graph)?;
            write_graph(&out, &graph::dual(&g, DualOptions { drop_frontier_faces })?)
        }
        Gen::RegularTriangulation { q, layers, out } => {
            check_output(&out.output)?;
            write_graph(&out, &lattice::regular_triangulation(q, layers)?)
        }
    }
}

fn run_analyze(cmd: Analyze) -> Result<()> {
    match cmd {
        Analyze::Vel {
            input,
            root,
            annuli,
            tol,
            max_rounds,
            out,
        } => {
            check_input(&input.graph)?;
            check_output(&out.output)?;
            let annuli: Vec<(usize, usize)> = annuli.iter().map(|a| parse_annulus(a)).collect::<Result<_>>()?;
            let g = read_graph(&input.graph)?;
            let opts = SolverOptions {
                tol,
                max_rounds,
                ..SolverOptions::default()
            };
            let report = vel::vel_type_trend(&g, root, &annuli, &opts)?;
            write_json(&out.output, &report)?;
            if report.annuli.iter().any(|a| !a.converged) {
                return Err(CliError::NotConverged("some annuli hit the round limit".into()));
            }
            Ok(())
        }
        Analyze::Resistance {
            input,
            root,
            radii,
            n_max,
            out,
        } => {
            check_input(&input.graph)?;
            check_output(&out.output)?;
            let radii = match radii {
                Some(s) => parse_list(&s)?,
                None => walk::default_radii(n_max),
            };
            let g = read_graph(&input.graph)?;
            let curve = walk::resistance_curve(&g, root, &radii)?;
            let verdict = walk::resistance_verdict(&curve);
            write_json(&out.output, &json!({ "root": root, "curve": curve, "verdict": verdict }))
        }
        Analyze::NashWilliams { input, root, n_max, out } => {
            check_input(&input.graph)?;
            check_output(&out.output)?;
            let g = read_graph(&input.graph)?;
            let layers = graph::bfs_layers(&g, root, n_max)?;
            let sums = walk::nash_williams_sum(&layers)?;
            let reliable = layers.reliable_depth();
            write_json(
                &out.output,
                &json!({
                    "root": root,
                    "reliable_depth": reliable,
                    "cut_sizes": &layers.cut_sizes()[..reliable.min(layers.cut_edges.len())],
                    "partial_sums": sums,
                }),
            )
        }
        Analyze::Doyle {
            input,
            grid_depth,
            root,
            n_max,
            out,
        } => {
            check_input(&input.graph)?;
            check_output(&out.output)?;
            let g = read_graph(&input.graph)?;
            write_json(&out.output, &walk::doyle_test(&g, grid_depth, root, n_max)?)
        }
        Analyze::RatioTrend { family, q, n, out } => {
            check_output(&out.output)?;
            let ns = parse_list(&n)?;
            let report = match family {
                Family::Hex => packing::ratio_trend(|n| Ok(lattice::hex_ball(n)), 0, &ns)?,
                Family::Regular => packing::ratio_trend(|n| lattice::regular_triangulation(q, n), 0, &ns)?,
            };
            write_json(&out.output, &report)
        }
        Analyze::Pack {
            input,
            boundary,
            format,
            edges,
            out,
        } => {
            check_input(&input.graph)?;
            check_output(&out.output)?;
            let g = read_graph(&input.graph)?;
            let bc = match boundary {
                Boundary::Euclidean => BoundaryCondition::EuclideanFixedBoundaryRadii,
                Boundary::Maximal => BoundaryCondition::MaximalInUnitDisk,
            };
            let p = match packing::pack_disk(&g, bc) {
                Err(speiser_lab::Error::NoConvergence { iterations, residual }) => {
                    write_json(
                        &out.output,
                        &json!({ "error": "no convergence", "iterations": iterations, "residual": residual }),
                    )?;
                    return Err(speiser_lab::Error::NoConvergence { iterations, residual }.into());
                }
                r => r?,
            };
            match format {
                Format::Json => write_json(&out.output, &packing::to_json(&p)),
                Format::Svg => write_text(&out.output, &packing::to_svg(&p, edges.then_some(&g))),
            }
        }
        Analyze::Fatness {
            disks,
            samples,
            radii,
            seed,
            out,
        } => {
            check_output(&out.output)?;
            let disks = disks.iter().map(|d| parse_disk(d)).collect::<Result<Vec<_>>>()?;
            let set = PlanarSet::new(disks)?;
            let est = fatness::fatness_estimate(&set, samples, radii, seed)?;
            write_json(&out.output, &json!({ "set": set, "estimate": est }))
        }
    }
}

fn run_theorem1(a: Theorem1Args) -> Result<()> {
    check_output(&a.out.output)?;
    check_output(&a.svg)?;
    let mut cfg = if a.config == "default" {
        Theorem1Config::default()
    } else {
        let path = Path::new(&a.config);
        check_input(path)?;
        let text = fs::read_to_string(path).map_err(speiser_lab::Error::from)?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))?
    };
    if let Some(seed) = a.seed {
        cfg.seed = seed;
    }
    let report = theorem1::run_theorem1(&cfg);
    write_text(&a.out.output, &theorem1::report_json(&report))?;
    if let Some(svg) = &a.svg {
        let tri = lattice::regular_triangulation(8, 4)?;
        let p = packing::pack_disk(&tri, BoundaryCondition::MaximalInUnitDisk)?;
        fs::write(svg, packing::to_svg(&p, Some(&tri))).map_err(speiser_lab::Error::from)?;
    }
    Ok(())
}

fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var(THREADS_VAR) else { return Ok(()) };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_VAR}={v:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Gen(g) => run_gen(g),
        Command::Analyze(a) => run_analyze(a),
        Command::Theorem1(t) => run_theorem1(t),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("speiser-lab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
