//! End-to-end run of the Speiser graph construction: a graph whose dual
//! side looks hyperbolic while the glued surface graph grows slowly enough
//! to look recurrent.
//!
//! Leg A works on the degree-8 triangulation dual to the octagonal base
//! graph. Leg B builds the stretched graph Γ, glues grids into its faces to
//! get Υ, and checks the growth bounds and cut-set sums.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bfs_layers, RotationGraph};
use crate::lattice;
use crate::packing::{self, CpTypeReport, CpVerdict};
use crate::speiser::{build_gamma, extend_speiser, ExtendedSpeiser, GrowthSchedule};
use crate::trend::{self, Growth};
use crate::vel::{self, SolverOptions, TypeTrendReport, TypeVerdict};
use crate::walk::{self, ResistanceCurve, WalkVerdict};

/// Seed recorded in reports when none is given.
pub const DEFAULT_SEED: u64 = 20_240_501;
/// Relative increment below which a resistance curve counts as settled.
pub const SETTLE_FRACTION: f64 = 0.01;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Theorem1Config {
    /// Depth of the octagonal base graph whose cut sets get stretched.
    pub depth: usize,
    pub schedule: Vec<u64>,
    pub growth_k_min: usize,
    pub growth_k_max: usize,
    /// Γ is cut down to this ball before grids are glued in.
    pub upsilon_radius: usize,
    pub grid_depth: usize,
    pub upsilon_k_min: usize,
    /// Resistance radii on Υ; empty skips the solve.
    pub upsilon_resistance_radii: Vec<usize>,
    /// Layers of the degree-8 triangulation used for leg A.
    pub dual_layers: usize,
    pub dual_resistance_radii: Vec<usize>,
    pub dual_vel_annuli: Vec<(usize, usize)>,
    pub dual_ratio_n: Vec<usize>,
    pub seed: u64,
}

impl Default for Theorem1Config {
    fn default() -> Self {
        Theorem1Config {
            depth: 2,
            schedule: vec![21, 8103],
            growth_k_min: 25,
            growth_k_max: 8000,
            upsilon_radius: 256,
            grid_depth: 256,
            upsilon_k_min: 25,
            upsilon_resistance_radii: vec![8, 16, 32, 64, 128, 255],
            dual_layers: 8,
            dual_resistance_radii: (1..=8).collect(),
            dual_vel_annuli: (1..=5).map(|k| (k, k + 1)).collect(),
            dual_ratio_n: (2..=8).collect(),
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthRow {
    pub k: usize,
    pub ball: usize,
    /// `k ln k`
    pub bound: f64,
    pub holds: bool,
    pub reliable: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthTable {
    pub rows: Vec<GrowthRow>,
    /// Every reliable row satisfies the bound.
    pub all_hold: bool,
    /// Smallest `k` from which the bound holds on every reliable row up to
    /// the end of the table.
    pub holds_from: Option<usize>,
    pub violations: usize,
    pub reliable_depth: usize,
}

fn holds_from<R>(rows: &[R], k: impl Fn(&R) -> usize, ok: impl Fn(&R) -> bool) -> Option<usize> {
    let mut from = None;
    for r in rows.iter().rev() {
        if !ok(r) {
            break;
        }
        from = Some(k(r));
    }
    from
}

/// Exact `|B_Γ(k)|` against `k ln k` for `k` in `[k_min, k_max]`, rooted at
/// vertex 0. Rows past the reliable depth are kept but flagged.
pub fn verify_growth(gamma: &RotationGraph, k_min: usize, k_max: usize) -> Result<GrowthTable> {
    if k_min < 2 || k_min > k_max {
        return Err(Error::InvalidArgument(format!("bad range [{k_min}, {k_max}]")));
    }
    let layers = bfs_layers(gamma, 0, k_max)?;
    let reliable_depth = layers.reliable_depth();
    let balls = layers.ball_sizes();
    let rows: Vec<GrowthRow> = (k_min..=k_max)
        .map(|k| {
            let bound = k as f64 * (k as f64).ln();
            GrowthRow {
                k,
                ball: balls[k],
                bound,
                holds: balls[k] as f64 <= bound,
                reliable: k <= reliable_depth,
            }
        })
        .collect();
    let reliable: Vec<&GrowthRow> = rows.iter().filter(|r| r.reliable).collect();
    let violations = reliable.iter().filter(|r| !r.holds).count();
    Ok(GrowthTable {
        all_hold: violations == 0 && !reliable.is_empty(),
        holds_from: holds_from(&reliable, |r| r.k, |r| r.holds),
        violations,
        rows,
        reliable_depth,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UpsilonRow {
    pub k: usize,
    pub sphere: usize,
    /// `4 k ln k`
    pub bound: f64,
    pub holds: bool,
    pub ball: usize,
    pub reliable: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UpsilonTable {
    pub rows: Vec<UpsilonRow>,
    pub all_hold: bool,
    pub holds_from: Option<usize>,
    pub violations: usize,
    pub reliable_depth: usize,
    /// Smallest `C` with `|B_Υ(k)| <= C k² ln k` on the reliable rows.
    pub fitted_c: f64,
    pub max_interior_degree: Option<usize>,
    /// Every non-frontier base vertex has exactly three grid vertices at
    /// each height `1..=grid_depth` directly above it.
    pub three_per_height: bool,
    /// Nash-Williams partial sums `P(1..=reliable_depth)`.
    pub nash_williams: Vec<f64>,
}

fn upsilon_table(ext: &ExtendedSpeiser, grid_depth: usize, k_min: usize, k_max: usize) -> Result<UpsilonTable> {
    let u = &ext.graph;
    let layers = bfs_layers(u, 0, k_max)?;
    let reliable_depth = layers.reliable_depth();
    let spheres = layers.sphere_sizes();
    let balls = layers.ball_sizes();
    let rows: Vec<UpsilonRow> = (k_min..=k_max)
        .map(|k| {
            let bound = 4.0 * k as f64 * (k as f64).ln();
            UpsilonRow {
                k,
                sphere: spheres[k],
                bound,
                holds: spheres[k] as f64 <= bound,
                ball: balls[k],
                reliable: k <= reliable_depth,
            }
        })
        .collect();
    let reliable: Vec<&UpsilonRow> = rows.iter().filter(|r| r.reliable).collect();
    let violations = reliable.iter().filter(|r| !r.holds).count();
    let fitted_c = (2..=reliable_depth.min(k_max))
        .map(|k| balls[k] as f64 / ((k * k) as f64 * (k as f64).ln()))
        .fold(0.0, f64::max);

    let mut per_height = vec![0usize; ext.base_count * grid_depth];
    for &(base, h) in &ext.columns {
        per_height[base * grid_depth + h - 1] += 1;
    }
    let three_per_height = (0..ext.base_count)
        .filter(|&v| !u.is_frontier(v))
        .all(|v| per_height[v * grid_depth..(v + 1) * grid_depth].iter().all(|&c| c == 3));

    Ok(UpsilonTable {
        all_hold: violations == 0 && !reliable.is_empty(),
        holds_from: holds_from(&reliable, |r| r.k, |r| r.holds),
        violations,
        rows,
        reliable_depth,
        fitted_c,
        max_interior_degree: u.max_interior_degree(),
        three_per_height,
        nash_williams: walk::nash_williams_sum(&layers)?,
    })
}

/// Glues grids of height `grid_depth` into `gamma` and tabulates `|S_Υ(k)|`
/// against `4k ln k` from `k = 25` up to `k_max` (trimmed to the reliable
/// range).
pub fn verify_upsilon_bounds(gamma: &RotationGraph, grid_depth: usize, k_max: usize) -> Result<UpsilonTable> {
    let ext = extend_speiser(gamma, grid_depth)?;
    upsilon_table(&ext, grid_depth, 25.min(k_max), k_max)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LegA {
    pub vertices: usize,
    pub resistance: ResistanceCurve,
    pub resistance_verdict: WalkVerdict,
    /// First radius whose resistance increment is below 1% of the value.
    pub resistance_settled_at: Option<usize>,
    pub vel: TypeTrendReport,
    pub cp: CpTypeReport,
    pub verdict: TypeVerdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LegB {
    pub gamma_vertices: usize,
    pub upsilon_vertices: usize,
    pub growth: GrowthTable,
    pub upsilon: UpsilonTable,
    pub nash_williams_increasing: bool,
    pub nash_williams_growth: Growth,
    pub resistance: Option<ResistanceCurve>,
    pub resistance_verdict: Option<WalkVerdict>,
    /// Set when a growth bound required by the construction fails.
    pub hypothesis_mismatch: bool,
    pub verdict: WalkVerdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Leg<T> {
    Completed(T),
    Failed { error: String },
}

impl<T> Leg<T> {
    fn from_result(r: Result<T>) -> Self {
        match r {
            Ok(t) => Leg::Completed(t),
            Err(e) => Leg::Failed { error: e.to_string() },
        }
    }

    pub fn completed(&self) -> Option<&T> {
        match self {
            Leg::Completed(t) => Some(t),
            Leg::Failed { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Report {
    pub config: Theorem1Config,
    pub leg_a: Leg<LegA>,
    pub leg_b: Leg<LegB>,
    /// Leg A hyperbolic-leaning and leg B recurrent-leaning with both
    /// growth bounds holding.
    pub consistent: bool,
}

/// Radius at which `R(n) - R(prev)` first drops below 1% of `R(n)`.
pub fn settled_at(curve: &ResistanceCurve) -> Option<usize> {
    curve
        .points
        .windows(2)
        .find(|w| (w[1].value - w[0].value) < SETTLE_FRACTION * w[1].value)
        .map(|w| w[1].n)
}

fn run_leg_a(cfg: &Theorem1Config) -> Result<LegA> {
    let tri = lattice::regular_triangulation(8, cfg.dual_layers)?;
    let ((resistance, vel), cp) = rayon::join(
        || {
            rayon::join(
                || walk::resistance_curve(&tri, 0, &cfg.dual_resistance_radii),
                || vel::vel_type_trend(&tri, 0, &cfg.dual_vel_annuli, &SolverOptions::default()),
            )
        },
        || packing::ratio_trend(|n| lattice::regular_triangulation(8, n), 0, &cfg.dual_ratio_n),
    );
    let (resistance, vel, cp) = (resistance?, vel?, cp?);
    let resistance_verdict = walk::resistance_verdict(&resistance);
    let verdict = match (resistance_verdict, vel.verdict, cp.verdict) {
        (WalkVerdict::TransientLeaning, TypeVerdict::HyperbolicLeaning, CpVerdict::CpHyperbolicLeaning) => {
            TypeVerdict::HyperbolicLeaning
        }
        (WalkVerdict::RecurrentLeaning, TypeVerdict::ParabolicLeaning, CpVerdict::CpParabolicLeaning) => {
            TypeVerdict::ParabolicLeaning
        }
        _ => TypeVerdict::Inconclusive,
    };
    Ok(LegA {
        vertices: tri.vertex_count(),
        resistance_settled_at: settled_at(&resistance),
        resistance,
        resistance_verdict,
        vel,
        cp,
        verdict,
    })
}

fn run_leg_b(cfg: &Theorem1Config) -> Result<LegB> {
    let schedule = GrowthSchedule::custom(cfg.schedule.clone())?;
    let gamma = build_gamma(cfg.depth, &schedule)?;
    let growth = verify_growth(&gamma, cfg.growth_k_min, cfg.growth_k_max)?;
    let (cut, _) = gamma.truncate_ball(0, cfg.upsilon_radius)?;
    let ext = extend_speiser(&cut, cfg.grid_depth)?;
    let k_max = cfg.upsilon_radius.min(cfg.grid_depth);
    let upsilon = upsilon_table(&ext, cfg.grid_depth, cfg.upsilon_k_min.min(k_max), k_max)?;

    let nw = &upsilon.nash_williams;
    let nash_williams_increasing = nw.windows(2).all(|w| w[1] > w[0]);
    let xs: Vec<f64> = (1..=nw.len()).map(|k| k as f64).collect();
    let nash_williams_growth = trend::log_vs_geometric(&xs, nw);

    let radii: Vec<usize> = cfg
        .upsilon_resistance_radii
        .iter()
        .copied()
        .filter(|&n| n <= upsilon.reliable_depth)
        .collect();
    let resistance = if radii.is_empty() {
        None
    } else {
        Some(walk::resistance_curve(&ext.graph, 0, &radii)?)
    };
    let resistance_verdict = resistance.as_ref().map(walk::resistance_verdict);

    let hypothesis_mismatch = !growth.all_hold || !upsilon.all_hold;
    let nw_verdict = WalkVerdict::from(nash_williams_growth);
    let verdict = match resistance_verdict {
        Some(r) if r != nw_verdict => WalkVerdict::Inconclusive,
        _ if !nash_williams_increasing => WalkVerdict::Inconclusive,
        _ => nw_verdict,
    };
    Ok(LegB {
        gamma_vertices: gamma.vertex_count(),
        upsilon_vertices: ext.graph.vertex_count(),
        growth,
        upsilon,
        nash_williams_increasing,
        nash_williams_growth,
        resistance,
        resistance_verdict,
        hypothesis_mismatch,
        verdict,
    })
}

/// Runs both legs concurrently. Failures inside a leg are recorded in the
/// report rather than returned.
pub fn run_theorem1(cfg: &Theorem1Config) -> Theorem1Report {
    let (a, b) = rayon::join(|| run_leg_a(cfg), || run_leg_b(cfg));
    let (leg_a, leg_b) = (Leg::from_result(a), Leg::from_result(b));
    let consistent = matches!(
        (&leg_a, &leg_b),
        (Leg::Completed(a), Leg::Completed(b))
            if a.verdict == TypeVerdict::HyperbolicLeaning
                && b.verdict == WalkVerdict::RecurrentLeaning
                && !b.hypothesis_mismatch
    );
    Theorem1Report {
        config: cfg.clone(),
        leg_a,
        leg_b,
        consistent,
    }
}

/// Pretty JSON with a trailing newline.
pub fn report_json(r: &Theorem1Report) -> String {
    let mut s = serde_json::to_string_pretty(r).expect("report serialises");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::classify;
    use crate::speiser::build_octagonal_speiser;

    fn small_gamma() -> RotationGraph {
        build_gamma(2, &GrowthSchedule::custom(vec![3, 5]).unwrap()).unwrap()
    }

    #[test]
    fn shell_arithmetic() {
        // Spheres inside shell n carry one vertex per replaced edge.
        let g = small_gamma();
        let psi = build_octagonal_speiser(2).unwrap();
        let cuts = bfs_layers(&psi, 0, 2).unwrap().cut_sizes();
        let s = bfs_layers(&g, 0, 8).unwrap().sphere_sizes();
        assert!(s[1..=3].iter().all(|&x| x == cuts[0]));
        assert!(s[4..8].iter().all(|&x| x == cuts[1]));
        for k in 1..=3 {
            assert!(s[k] <= 3);
        }
        for k in 4..=8 {
            assert!(s[k] <= 9);
        }
        let c = classify(&g);
        assert!(c.is_bipartite);
    }

    #[test]
    fn growth_table_flags_and_prefixes() {
        let g = small_gamma();
        let t = verify_growth(&g, 2, 20).unwrap();
        assert_eq!(t.reliable_depth, 9);
        assert!(t.rows.iter().all(|r| r.reliable == (r.k <= 9)));
        let short = verify_growth(&g, 2, 6).unwrap();
        assert_eq!(&t.rows[..short.rows.len()], &short.rows[..]);
        // At k = 2 the ball already exceeds 2 ln 2.
        assert!(!t.rows[0].holds);
        assert!(verify_growth(&g, 1, 4).is_err());
    }

    #[test]
    fn identity_schedule_fails_growth() {
        let psi = build_gamma(6, &GrowthSchedule::custom(vec![1; 6]).unwrap()).unwrap();
        let t = verify_growth(&psi, 2, 6).unwrap();
        assert!(!t.rows.last().unwrap().holds);
    }

    #[test]
    fn upsilon_table_basics() {
        let g = small_gamma();
        let (cut, _) = g.truncate_ball(0, 6).unwrap();
        let t = verify_upsilon_bounds(&cut, 6, 6).unwrap();
        assert!(t.three_per_height);
        assert!(t.max_interior_degree.unwrap() <= 6);
        assert!(t.fitted_c.is_finite() && t.fitted_c > 0.0);
        assert!(t.nash_williams.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn even_schedule_is_reported() {
        let cfg = Theorem1Config {
            schedule: vec![20, 8103],
            dual_layers: 3,
            dual_resistance_radii: vec![1, 2, 3],
            dual_vel_annuli: vec![(1, 2)],
            dual_ratio_n: vec![2],
            ..Theorem1Config::default()
        };
        let r = run_theorem1(&cfg);
        assert!(matches!(&r.leg_b, Leg::Failed { error } if error.contains("odd")));
        assert!(r.leg_a.completed().is_some());
        assert!(!r.consistent);
    }

    #[test]
    fn config_round_trip() {
        let cfg = Theorem1Config::default();
        let s = serde_json::to_string(&cfg).unwrap();
        assert_eq!(serde_json::from_str::<Theorem1Config>(&s).unwrap(), cfg);
        let partial: Theorem1Config = serde_json::from_str(r#"{"depth": 3}"#).unwrap();
        assert_eq!(partial.depth, 3);
        assert!(serde_json::from_str::<Theorem1Config>(r#"{"bogus": 1}"#).is_err());
    }
}
