//! Circle packings of finite disk triangulations: radius iteration, layout,
//! root-radius trends and the collection of inscribed disks.
//!
//! Radii live in one of two geometries. Euclidean packings use ordinary
//! radii. Maximal packings in the unit disk use hyperbolic `s`-radii,
//! `s = exp(-h)`, so a horocycle is simply `s = 0`.

use std::collections::{HashSet, VecDeque};
use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fatness::{Disk, FatCollection, PlanarSet};
use crate::graph::{edge_of, trace_faces, RotationGraph, VertexId};
use crate::trend::{self, Growth, LinearFit};

pub const ANGLE_TOL: f64 = 1e-10;
pub const MAX_SWEEPS: usize = 100_000;
/// Hyperbolic radius standing in for an infinite boundary radius.
pub const HOROCYCLE_RADIUS: f64 = 1000.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryCondition {
    EuclideanFixedBoundaryRadii,
    MaximalInUnitDisk,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PackOptions {
    /// Boundary radius for euclidean packings.
    pub boundary_radius: f64,
    /// Boundary hyperbolic radius for maximal packings.
    pub horocycle_radius: f64,
    pub tol: f64,
    pub max_sweeps: usize,
    /// Vertex placed at the origin; defaults to the first interior vertex.
    pub root: Option<VertexId>,
    /// Petal of the root laid out along the positive real axis.
    pub start_slot: usize,
}

impl Default for PackOptions {
    fn default() -> Self {
        PackOptions {
            boundary_radius: 1.0,
            horocycle_radius: HOROCYCLE_RADIUS,
            tol: ANGLE_TOL,
            max_sweeps: MAX_SWEEPS,
            root: None,
            start_slot: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CirclePacking {
    pub boundary_condition: BoundaryCondition,
    pub root: VertexId,
    pub interior: Vec<bool>,
    /// Solver radii: euclidean radii, or `s`-radii for maximal packings.
    pub labels: Vec<f64>,
    /// Euclidean radii of the laid-out circles.
    pub radii: Vec<f64>,
    pub centers: Vec<[f64; 2]>,
    /// Interior faces, corners counter-clockwise.
    pub triangles: Vec<[VertexId; 3]>,
    pub sweeps: usize,
    pub angle_residual: f64,
}

struct Flowers {
    interior: Vec<bool>,
    /// Neighbours of each interior vertex, counter-clockwise; empty on the boundary.
    petals: Vec<Vec<VertexId>>,
    triangles: Vec<[VertexId; 3]>,
}

fn flowers(g: &RotationGraph) -> Result<Flowers> {
    if !g.has_frontier() {
        return Err(Error::Precondition("packing needs a boundary (frontier) cycle".into()));
    }
    let faces = trace_faces(g);
    let mut triangles = Vec::new();
    for f in faces.interior() {
        let w = faces.walk(f);
        if w.len() != 3 {
            return Err(Error::NotTriangulation { face: f, len: w.len() });
        }
        // Walks run clockwise.
        triangles.push([g.origin(w[0]), g.origin(w[2]), g.origin(w[1])]);
    }
    let interior: Vec<bool> = g.vertices().map(|v| !g.is_frontier(v)).collect();
    let mut petals = vec![Vec::new(); g.vertex_count()];
    for v in g.vertices().filter(|&v| interior[v]) {
        for &h in g.rotation(v) {
            let f = faces.face_of(h);
            if faces.is_frontier_face(f) {
                return Err(Error::Precondition(format!(
                    "interior vertex {v} lies on a boundary face"
                )));
            }
        }
        if g.degree(v) < 3 {
            return Err(Error::Precondition(format!("interior vertex {v} has degree < 3")));
        }
        petals[v] = g.rotation(v).iter().map(|&h| g.head(h)).collect();
    }
    if !interior.iter().any(|&b| b) {
        return Err(Error::Precondition("no interior vertex".into()));
    }
    Ok(Flowers {
        interior,
        petals,
        triangles,
    })
}

fn euclid_angle(r: f64, a: f64, b: f64) -> f64 {
    2.0 * (a * b / ((r + a) * (r + b))).sqrt().min(1.0).asin()
}

fn hyp_angle(s: f64, a: f64, b: f64) -> f64 {
    let x = s * s * (1.0 - a * a) * (1.0 - b * b) / ((1.0 - s * s * a * a) * (1.0 - s * s * b * b));
    2.0 * x.sqrt().min(1.0).asin()
}

fn angle(hyp: bool, r: f64, a: f64, b: f64) -> f64 {
    if hyp {
        hyp_angle(r, a, b)
    } else {
        euclid_angle(r, a, b)
    }
}

fn angle_sum(hyp: bool, labels: &[f64], v: VertexId, petals: &[VertexId]) -> f64 {
    let k = petals.len();
    (0..k)
        .map(|i| angle(hyp, labels[v], labels[petals[i]], labels[petals[(i + 1) % k]]))
        .sum()
}

/// Uniform-neighbour update: the radius a flower of `k` equal petals would
/// need to close up, given the current angle sum.
fn updated(hyp: bool, r: f64, theta: f64, k: usize) -> f64 {
    let k = k as f64;
    let beta = (theta / (2.0 * k)).sin();
    let delta = (PI / k).sin();
    if hyp {
        let x = ((r - beta) / (r * (1.0 - beta * r))).max(0.0);
        let q = 1.0 - x;
        2.0 * delta / (q + (q * q + 4.0 * delta * delta * x).sqrt())
    } else {
        let virt = r * beta / (1.0 - beta);
        virt * (1.0 - delta) / delta
    }
}

fn max_residual(hyp: bool, fl: &Flowers, labels: &[f64]) -> f64 {
    (0..labels.len())
        .filter(|&v| fl.interior[v])
        .map(|v| (angle_sum(hyp, labels, v, &fl.petals[v]) - 2.0 * PI).abs())
        .fold(0.0, f64::max)
}

fn solve(hyp: bool, fl: &Flowers, labels: &mut [f64], tol: f64, max_sweeps: usize) -> Result<usize> {
    let order: Vec<VertexId> = (0..labels.len()).filter(|&v| fl.interior[v]).collect();
    let mut worst = f64::INFINITY;
    for sweep in 1..=max_sweeps {
        worst = 0.0;
        for &v in &order {
            let petals = &fl.petals[v];
            let theta = angle_sum(hyp, labels, v, petals);
            worst = worst.max((theta - 2.0 * PI).abs());
            labels[v] = updated(hyp, labels[v], theta, petals.len());
        }
        if worst < tol {
            return Ok(sweep);
        }
    }
    Err(Error::NoConvergence {
        iterations: max_sweeps,
        residual: worst,
    })
}

fn cx(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

fn layout_order(fl: &Flowers, root: VertexId, start_slot: usize, mut place: impl FnMut(VertexId, VertexId, Option<VertexId>)) -> Result<()> {
    // `place(v, u, prev)` puts petal `u` of the placed interior vertex `v`;
    // `prev` is the petal before `u`, already placed, or `None` for the
    // very first petal.
    let n = fl.interior.len();
    let mut placed = vec![false; n];
    let mut queue = VecDeque::from([root]);
    placed[root] = true;
    let k = fl.petals[root].len();
    let first = fl.petals[root][start_slot % k];
    place(root, first, None);
    placed[first] = true;
    if fl.interior[first] {
        queue.push_back(first);
    }
    while let Some(v) = queue.pop_front() {
        let petals = &fl.petals[v];
        let k = petals.len();
        let i = if v == root {
            start_slot % k
        } else {
            (0..k).find(|&i| placed[petals[i]]).expect("BFS parent is placed")
        };
        for step in 1..k {
            let j = (i + step) % k;
            let u = petals[j];
            if placed[u] {
                continue;
            }
            place(v, u, Some(petals[(j + k - 1) % k]));
            placed[u] = true;
            if fl.interior[u] {
                queue.push_back(u);
            }
        }
    }
    match placed.iter().position(|&p| !p) {
        Some(v) => Err(Error::Precondition(format!(
            "vertex {v} is not reachable through interior flowers"
        ))),
        None => Ok(()),
    }
}

fn layout_euclid(fl: &Flowers, r: &[f64], root: VertexId, start_slot: usize) -> Result<Vec<[f64; 2]>> {
    let mut pos = vec![Complex64::new(0.0, 0.0); r.len()];
    layout_order(fl, root, start_slot, |v, u, prev| {
        let dir = match prev {
            None => 0.0,
            Some(p) => (pos[p] - pos[v]).arg() + euclid_angle(r[v], r[p], r[u]),
        };
        pos[u] = pos[v] + Complex64::from_polar(r[v] + r[u], dir);
    })?;
    Ok(pos.into_iter().map(|z| [z.re, z.im]).collect())
}

/// Euclidean circles of a maximal packing, root centred at 0.
fn layout_hyperbolic(fl: &Flowers, s: &[f64], root: VertexId, start_slot: usize) -> Result<(Vec<[f64; 2]>, Vec<f64>)> {
    let n = s.len();
    // Hyperbolic centre, or the ideal point of a horocycle.
    let mut hpos = vec![Complex64::new(0.0, 0.0); n];
    let mut anchor = vec![usize::MAX; n];
    layout_order(fl, root, start_slot, |v, u, prev| {
        let zv = hpos[v];
        let to_v = |w: Complex64| (w - zv) / (Complex64::new(1.0, 0.0) - zv.conj() * w);
        let from_v = |w: Complex64| (w + zv) / (Complex64::new(1.0, 0.0) + zv.conj() * w);
        let dir = match prev {
            None => 0.0,
            Some(p) => to_v(hpos[p]).arg() + hyp_angle(s[v], s[p], s[u]),
        };
        let reach = if s[u] == 0.0 {
            1.0
        } else {
            (1.0 - s[v] * s[u]) / (1.0 + s[v] * s[u])
        };
        hpos[u] = from_v(Complex64::from_polar(reach, dir));
        anchor[u] = v;
    })?;
    let mut centers = vec![[0.0; 2]; n];
    let mut radii = vec![0.0; n];
    for v in 0..n {
        if s[v] > 0.0 {
            let t = (1.0 - s[v]) / (1.0 + s[v]);
            let z = hpos[v];
            let denom = 1.0 - t * t * z.norm_sqr();
            let c = z * ((1.0 - t * t) / denom);
            centers[v] = [c.re, c.im];
            radii[v] = t * (1.0 - z.norm_sqr()) / denom;
        }
    }
    for v in (0..n).filter(|&v| s[v] == 0.0) {
        let a = anchor[v];
        let zeta = hpos[v];
        let w = zeta - cx(centers[a]);
        let rho = (w.norm_sqr() - radii[a] * radii[a]) / (2.0 * ((w.conj() * zeta).re + radii[a]));
        let c = zeta * (1.0 - rho);
        centers[v] = [c.re, c.im];
        radii[v] = rho;
    }
    Ok((centers, radii))
}

pub fn pack_disk(g: &RotationGraph, boundary: BoundaryCondition) -> Result<CirclePacking> {
    pack_disk_with(g, boundary, &PackOptions::default())
}

/// Solves for radii with interior angle sums `2π`, then lays the circles
/// out flower by flower from the root.
pub fn pack_disk_with(g: &RotationGraph, boundary: BoundaryCondition, opts: &PackOptions) -> Result<CirclePacking> {
    let fl = flowers(g)?;
    let root = match opts.root {
        Some(r) if r >= g.vertex_count() => return Err(Error::UnknownVertex(r)),
        Some(r) if !fl.interior[r] => {
            return Err(Error::InvalidArgument(format!("root {r} is on the boundary")))
        }
        Some(r) => r,
        None => fl.interior.iter().position(|&b| b).expect("checked non-empty"),
    };
    let hyp = boundary == BoundaryCondition::MaximalInUnitDisk;
    let mut labels: Vec<f64> = if hyp {
        let sb = (-opts.horocycle_radius).exp();
        fl.interior.iter().map(|&i| if i { 0.5 } else { sb }).collect()
    } else {
        if !(opts.boundary_radius > 0.0) {
            return Err(Error::InvalidArgument("boundary radius must be positive".into()));
        }
        vec![opts.boundary_radius; g.vertex_count()]
    };
    let sweeps = solve(hyp, &fl, &mut labels, opts.tol, opts.max_sweeps)?;
    let angle_residual = max_residual(hyp, &fl, &labels);
    let (centers, radii) = if hyp {
        layout_hyperbolic(&fl, &labels, root, opts.start_slot)?
    } else {
        (layout_euclid(&fl, &labels, root, opts.start_slot)?, labels.clone())
    };
    Ok(CirclePacking {
        boundary_condition: boundary,
        root,
        interior: fl.interior,
        labels,
        radii,
        centers,
        triangles: fl.triangles,
        sweeps,
        angle_residual,
    })
}

/// Measured deviations of a laid-out packing from its invariants.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PackingCheck {
    /// Worst euclidean angle-sum error at an interior vertex.
    pub max_angle_residual: f64,
    /// Worst relative gap between tangent circles.
    pub max_tangency_error: f64,
    /// Smallest `(|c_v - c_w| - r_v - r_w) / (r_v + r_w)` over non-adjacent pairs.
    pub min_separation: f64,
}

impl PackingCheck {
    pub fn holds(&self) -> bool {
        self.max_angle_residual < 1e-8 && self.max_tangency_error < 1e-7 && self.min_separation >= -1e-7
    }
}

pub fn check_packing(g: &RotationGraph, p: &CirclePacking) -> Result<PackingCheck> {
    let fl = flowers(g)?;
    let max_angle_residual = max_residual(false, &fl, &p.radii);
    let mut adjacent = HashSet::new();
    let mut max_tangency_error: f64 = 0.0;
    for e in g.edges() {
        let (v, w) = g.endpoints(e);
        adjacent.insert((v.min(w), v.max(w)));
        let d = (cx(p.centers[v]) - cx(p.centers[w])).norm();
        let sum = p.radii[v] + p.radii[w];
        max_tangency_error = max_tangency_error.max((d - sum).abs() / sum);
    }
    let n = p.radii.len();
    let mut order: Vec<VertexId> = (0..n).collect();
    let left = |v: VertexId| p.centers[v][0] - p.radii[v];
    order.sort_by(|&a, &b| left(a).total_cmp(&left(b)));
    let mut min_separation = f64::INFINITY;
    for (i, &v) in order.iter().enumerate() {
        let right = p.centers[v][0] + p.radii[v];
        for &w in &order[i + 1..] {
            if left(w) > right {
                break;
            }
            if adjacent.contains(&(v.min(w), v.max(w))) {
                continue;
            }
            let d = (cx(p.centers[v]) - cx(p.centers[w])).norm();
            let sum = p.radii[v] + p.radii[w];
            min_separation = min_separation.min((d - sum) / sum);
        }
    }
    Ok(PackingCheck {
        max_angle_residual,
        max_tangency_error,
        min_separation,
    })
}

fn triangle_angles(p: &CirclePacking, t: &[VertexId; 3]) -> [f64; 3] {
    let r = |i: usize| p.radii[t[i]];
    [
        euclid_angle(r(0), r(1), r(2)),
        euclid_angle(r(1), r(2), r(0)),
        euclid_angle(r(2), r(0), r(1)),
    ]
}

/// Total turning of the carrier boundary computed from angle sums:
/// `sum over boundary of (π - θ_v)` plus the interior defects. Equals `2π`
/// for a triangulated disk.
pub fn boundary_turning(p: &CirclePacking) -> f64 {
    let mut theta = vec![0.0; p.radii.len()];
    for t in &p.triangles {
        for (i, a) in triangle_angles(p, t).into_iter().enumerate() {
            theta[t[i]] += a;
        }
    }
    theta
        .iter()
        .zip(&p.interior)
        .map(|(&th, &inner)| if inner { 2.0 * PI - th } else { PI - th })
        .sum()
}

/// Inscribed disk of the triangle of centres; it touches each side at the
/// tangency point of the two circles on that side.
pub fn incircle(p: &CirclePacking, t: &[VertexId; 3]) -> Disk {
    let (ru, rv, rw) = (p.radii[t[0]], p.radii[t[1]], p.radii[t[2]]);
    let (a, b, c) = (rv + rw, ru + rw, ru + rv);
    let z = (cx(p.centers[t[0]]) * a + cx(p.centers[t[1]]) * b + cx(p.centers[t[2]]) * c) / (a + b + c);
    Disk::new(z.re, z.im, (ru * rv * rw / (ru + rv + rw)).sqrt())
}

/// Packed disks for the vertices of `g` and unions of the inscribed disks
/// of the (at most two) faces on each edge, indexed as the vertices of the
/// four-triangle subdivision: vertex `v`, then `V + e` for edge `e`.
/// Edges with a single interior face are flagged.
pub fn inscribed_collection(g: &RotationGraph, p: &CirclePacking) -> Result<FatCollection> {
    let faces = trace_faces(g);
    let nv = g.vertex_count();
    let mut per_edge: Vec<Vec<Disk>> = vec![Vec::new(); g.edge_count()];
    for f in faces.interior() {
        let w = faces.walk(f);
        if w.len() != 3 {
            return Err(Error::NotTriangulation { face: f, len: w.len() });
        }
        let disk = incircle(p, &[g.origin(w[0]), g.origin(w[2]), g.origin(w[1])]);
        for &h in w {
            per_edge[edge_of(h)].push(disk);
        }
    }
    let mut sets = Vec::with_capacity(nv + g.edge_count());
    for v in g.vertices() {
        sets.push(PlanarSet::disk(Disk::new(p.centers[v][0], p.centers[v][1], p.radii[v]))?);
    }
    let mut flagged = Vec::new();
    for (e, disks) in per_edge.into_iter().enumerate() {
        match disks.len() {
            0 => {
                return Err(Error::Precondition(format!("edge {e} bounds no interior face")));
            }
            1 => flagged.push(nv + e),
            _ => {}
        }
        sets.push(PlanarSet::new(disks)?);
    }
    Ok(FatCollection {
        sets,
        tau: 1.0 / 16.0,
        overlap_bound: 7,
        flagged,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CpVerdict {
    CpParabolicLeaning,
    CpHyperbolicLeaning,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CpPoint {
    pub n: usize,
    pub vertices: usize,
    /// Euclidean radius of the root circle in the maximal packing.
    pub root_radius: f64,
    pub sweeps: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CpTypeReport {
    pub points: Vec<CpPoint>,
    /// `ρ(n+1) / ρ(n)` for consecutive entries.
    pub ratios: Vec<f64>,
    /// Least-squares line through `(n, ln ρ(n))`.
    pub log_fit: Option<LinearFit>,
    /// Growth of `1 / ρ(n)`.
    pub growth: Growth,
    pub verdict: CpVerdict,
}

/// Root radii of maximal packings of `family(n)` for each `n`.
///
/// A root radius shrinking to zero (linear growth of `1/ρ`) points to a
/// carrier that is the whole plane; a root radius settling at a positive
/// limit points to the disk.
pub fn ratio_trend<F>(family: F, root: VertexId, n_list: &[usize]) -> Result<CpTypeReport>
where
    F: Fn(usize) -> Result<RotationGraph> + Sync,
{
    let opts = PackOptions {
        root: Some(root),
        ..PackOptions::default()
    };
    let points: Vec<CpPoint> = n_list
        .par_iter()
        .map(|&n| {
            let g = family(n)?;
            let p = pack_disk_with(&g, BoundaryCondition::MaximalInUnitDisk, &opts)?;
            Ok(CpPoint {
                n,
                vertices: g.vertex_count(),
                root_radius: p.radii[root],
                sweeps: p.sweeps,
            })
        })
        .collect::<Result<_>>()?;
    let ratios = points.windows(2).map(|w| w[1].root_radius / w[0].root_radius).collect();
    let xs: Vec<f64> = points.iter().map(|p| p.n as f64).collect();
    let log_fit = (points.len() >= 2).then(|| {
        let ys: Vec<f64> = points.iter().map(|p| p.root_radius.ln()).collect();
        trend::linear_fit(&xs, &ys)
    });
    let inv: Vec<f64> = points.iter().map(|p| 1.0 / p.root_radius).collect();
    let growth = trend::linear_vs_geometric(&xs, &inv);
    let verdict = match growth {
        Growth::Unbounded => CpVerdict::CpParabolicLeaning,
        Growth::Bounded => CpVerdict::CpHyperbolicLeaning,
        Growth::Inconclusive => CpVerdict::Inconclusive,
    };
    Ok(CpTypeReport {
        points,
        ratios,
        log_fit,
        growth,
        verdict,
    })
}

/// Relative change of the root radius when the boundary hyperbolic radius
/// is `h` instead of [`HOROCYCLE_RADIUS`].
pub fn boundary_sensitivity(g: &RotationGraph, root: VertexId, h: f64) -> Result<f64> {
    let base = PackOptions {
        root: Some(root),
        ..PackOptions::default()
    };
    let alt = PackOptions {
        horocycle_radius: h,
        ..base
    };
    let a = pack_disk_with(g, BoundaryCondition::MaximalInUnitDisk, &base)?.radii[root];
    let b = pack_disk_with(g, BoundaryCondition::MaximalInUnitDisk, &alt)?.radii[root];
    Ok((b - a).abs() / a)
}

/// SVG y axis points down; `0.0 - y` also avoids printing `-0`.
fn flip(y: f64) -> f64 {
    0.0 - y
}

fn round12(x: f64) -> f64 {
    format!("{x:.11e}").parse().expect("formatted float parses")
}

/// Radii and centres rounded to 12 significant digits.
pub fn to_json(p: &CirclePacking) -> serde_json::Value {
    serde_json::json!({
        "boundary_condition": p.boundary_condition,
        "root": p.root,
        "radii": p.radii.iter().map(|&r| round12(r)).collect::<Vec<_>>(),
        "centers": p.centers.iter().map(|c| [round12(c[0]), round12(c[1])]).collect::<Vec<_>>(),
        "angle_residual": p.angle_residual,
        "sweeps": p.sweeps,
    })
}

/// SVG drawing of the circles, with the nerve when `g` is given.
pub fn to_svg(p: &CirclePacking, g: Option<&RotationGraph>) -> String {
    let mut b = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
    for (c, &r) in p.centers.iter().zip(&p.radii) {
        b[0] = b[0].min(c[0] - r);
        b[1] = b[1].min(flip(c[1]) - r);
        b[2] = b[2].max(c[0] + r);
        b[3] = b[3].max(flip(c[1]) + r);
    }
    let pad = 0.02 * (b[2] - b[0]).max(b[3] - b[1]);
    let stroke = pad / 10.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">"#,
        b[0] - pad,
        b[1] - pad,
        b[2] - b[0] + 2.0 * pad,
        b[3] - b[1] + 2.0 * pad
    );
    let _ = writeln!(out, r#"<g fill="none" stroke="black" stroke-width="{stroke}">"#);
    for (c, &r) in p.centers.iter().zip(&p.radii) {
        let _ = writeln!(out, r#"<circle cx="{}" cy="{}" r="{}"/>"#, c[0], flip(c[1]), r);
    }
    out.push_str("</g>\n");
    if let Some(g) = g {
        let _ = writeln!(out, r#"<g stroke="red" stroke-width="{}">"#, stroke / 2.0);
        for e in g.edges() {
            let (v, w) = g.endpoints(e);
            let (a, c) = (p.centers[v], p.centers[w]);
            let _ = writeln!(out, r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#, a[0], flip(a[1]), c[0], flip(c[1]));
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}
