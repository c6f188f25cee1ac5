//! Electrical tests for recurrence of simple random walk: effective
//! resistance to a grounded sphere, Nash-Williams cut sums, and both run on
//! the grid extension of a Speiser graph.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bfs_layers, classify, LayerDecomposition, RotationGraph, VertexId};
use crate::speiser::extend_speiser;
use crate::trend::{log_vs_geometric, Growth};

/// Relative residual at which the conjugate gradient iteration stops.
pub const CG_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Resistance {
    pub n: usize,
    pub value: f64,
    /// Relative residual `|b - Ax| / |b|` of the final iterate.
    pub residual: f64,
    pub iterations: usize,
}

/// Symmetric sparse matrix in compressed rows.
struct Csr {
    start: Vec<usize>,
    col: Vec<usize>,
    val: Vec<f64>,
    diag: Vec<f64>,
}

impl Csr {
    fn mul(&self, x: &[f64], y: &mut [f64]) {
        for i in 0..self.diag.len() {
            let mut s = self.diag[i] * x[i];
            for k in self.start[i]..self.start[i + 1] {
                s += self.val[k] * x[self.col[k]];
            }
            y[i] = s;
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Jacobi-preconditioned conjugate gradient. Returns the solution, the
/// relative residual and the iteration count.
fn cg(a: &Csr, b: &[f64], tol: f64) -> Result<(Vec<f64>, f64, usize)> {
    let n = b.len();
    let bnorm = dot(b, b).sqrt();
    let mut x = vec![0.0; n];
    if bnorm == 0.0 {
        return Ok((x, 0.0, 0));
    }
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&a.diag).map(|(ri, d)| ri / d).collect();
    let mut p = z.clone();
    let mut ap = vec![0.0; n];
    let mut rz = dot(&r, &z);
    let cap = 20 * n + 1000;
    for it in 1..=cap {
        a.mul(&p, &mut ap);
        let alpha = rz / dot(&p, &ap);
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let res = dot(&r, &r).sqrt() / bnorm;
        if res <= tol {
            // Confirm against the true residual, not the recurrence.
            a.mul(&x, &mut ap);
            let true_res = b
                .iter()
                .zip(&ap)
                .map(|(bi, axi)| (bi - axi).powi(2))
                .sum::<f64>()
                .sqrt()
                / bnorm;
            if true_res <= tol {
                return Ok((x, true_res, it));
            }
        }
        for i in 0..n {
            z[i] = r[i] / a.diag[i];
        }
        let rz_new = dot(&r, &z);
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(Error::NoConvergence {
        iterations: cap,
        residual: dot(&r, &r).sqrt() / bnorm,
    })
}

/// Effective resistance between `root` and the sphere `S(n)`, shorted
/// together, with one unit resistor per edge (parallel copies add).
///
/// Errors if a frontier vertex lies strictly inside the ball.
pub fn effective_resistance(g: &RotationGraph, root: VertexId, n: usize) -> Result<Resistance> {
    if n == 0 {
        return Err(Error::InvalidArgument("radius must be at least 1".into()));
    }
    let layers = bfs_layers(g, root, n)?;
    resistance_from_layers(g, &layers, n)
}

fn resistance_from_layers(
    g: &RotationGraph,
    layers: &LayerDecomposition,
    n: usize,
) -> Result<Resistance> {
    if layers.spheres[n].is_empty() {
        return Err(Error::InvalidArgument(format!("sphere {n} is empty")));
    }
    if let Some(&v) = layers.spheres[..n].iter().flatten().find(|&&v| g.is_frontier(v)) {
        return Err(Error::FrontierInside(v));
    }
    let root = layers.root;
    // Unknowns: vertices at distance 1..n-1.
    let mut index = vec![usize::MAX; g.vertex_count()];
    let unknowns: Vec<VertexId> = layers.spheres[1..n].iter().flatten().copied().collect();
    for (i, &v) in unknowns.iter().enumerate() {
        index[v] = i;
    }
    let mut start = Vec::with_capacity(unknowns.len() + 1);
    let mut col = Vec::new();
    let mut val = Vec::new();
    let mut diag = Vec::with_capacity(unknowns.len());
    let mut rhs = Vec::with_capacity(unknowns.len());
    start.push(0);
    for &v in &unknowns {
        let mut b = 0.0;
        let mut entries: Vec<usize> = Vec::new();
        for w in g.neighbors(v) {
            if w == root {
                b += 1.0;
            } else if index[w] != usize::MAX {
                entries.push(index[w]);
            }
        }
        entries.sort_unstable();
        let mut k = 0;
        while k < entries.len() {
            let c = entries[k];
            let mut mult = 0.0;
            while k < entries.len() && entries[k] == c {
                mult += 1.0;
                k += 1;
            }
            col.push(c);
            val.push(-mult);
        }
        start.push(col.len());
        diag.push(g.degree(v) as f64);
        rhs.push(b);
    }
    let a = Csr {
        start,
        col,
        val,
        diag,
    };
    let (phi, residual, iterations) = cg(&a, &rhs, CG_TOL)?;
    let current: f64 = g
        .neighbors(root)
        .map(|w| 1.0 - if index[w] != usize::MAX { phi[index[w]] } else { 0.0 })
        .sum();
    Ok(Resistance {
        n,
        value: 1.0 / current,
        residual,
        iterations,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResistanceCurve {
    pub points: Vec<Resistance>,
}

impl ResistanceCurve {
    pub fn radii(&self) -> Vec<usize> {
        self.points.iter().map(|p| p.n).collect()
    }

    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.value).collect()
    }
}

/// Resistances at each radius, solved in parallel.
pub fn resistance_curve(
    g: &RotationGraph,
    root: VertexId,
    radii: &[usize],
) -> Result<ResistanceCurve> {
    let n_max = radii.iter().copied().max().unwrap_or(0);
    if radii.contains(&0) {
        return Err(Error::InvalidArgument("radius must be at least 1".into()));
    }
    let layers = bfs_layers(g, root, n_max)?;
    let points = radii
        .par_iter()
        .map(|&n| resistance_from_layers(g, &layers, n))
        .collect::<Result<Vec<_>>>()?;
    Ok(ResistanceCurve { points })
}

/// Partial sums `P(n) = sum_{k<n} 1/|E(k)|` for `n = 1..=reliable depth`.
pub fn nash_williams_sum(layers: &LayerDecomposition) -> Result<Vec<f64>> {
    let upto = layers.reliable_depth();
    let mut sums = Vec::with_capacity(upto);
    let mut acc = 0.0;
    for k in 0..upto {
        let c = layers.cut_edges[k].len();
        if c == 0 {
            return Err(Error::Precondition(format!("cut set E({k}) is empty")));
        }
        acc += 1.0 / c as f64;
        sums.push(acc);
    }
    Ok(sums)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WalkVerdict {
    RecurrentLeaning,
    TransientLeaning,
    Inconclusive,
}

impl From<Growth> for WalkVerdict {
    fn from(g: Growth) -> Self {
        match g {
            Growth::Unbounded => WalkVerdict::RecurrentLeaning,
            Growth::Bounded => WalkVerdict::TransientLeaning,
            Growth::Inconclusive => WalkVerdict::Inconclusive,
        }
    }
}

/// `ln`-growth against convergence of a resistance curve.
pub fn resistance_verdict(curve: &ResistanceCurve) -> WalkVerdict {
    let xs: Vec<f64> = curve.radii().iter().map(|&n| n as f64).collect();
    log_vs_geometric(&xs, &curve.values()).into()
}

/// Radii `1..=n` when small, otherwise a roughly geometric selection.
pub fn default_radii(n: usize) -> Vec<usize> {
    if n <= 32 {
        return (1..=n).collect();
    }
    let mut out: Vec<usize> = (1..=8).collect();
    let mut r = 8.0f64;
    while (r * 1.25).round() as usize <= n {
        r *= 1.25;
        out.push(r.round() as usize);
    }
    if *out.last().unwrap() != n {
        out.push(n);
    }
    out.dedup();
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DoyleReport {
    /// Set when the input is not bipartite and homogeneous.
    pub not_speiser: bool,
    pub vertex_count: usize,
    pub reliable_depth: usize,
    pub max_interior_degree: Option<usize>,
    pub sphere_sizes: Vec<usize>,
    pub cut_sizes: Vec<usize>,
    pub nash_williams: Vec<f64>,
    pub resistance: ResistanceCurve,
    pub verdict: WalkVerdict,
}

/// Glues grids of height `grid_depth` into the faces of `speiser_graph` and
/// runs the resistance and cut-set tests out to `n_max` (or the reliable
/// depth, whichever is smaller).
pub fn doyle_test(
    speiser_graph: &RotationGraph,
    grid_depth: usize,
    root: VertexId,
    n_max: usize,
) -> Result<DoyleReport> {
    let c = classify(speiser_graph);
    let not_speiser = !c.is_bipartite || c.homogeneous_degree.is_none();
    let ext = extend_speiser(speiser_graph, grid_depth)?;
    let upsilon = &ext.graph;
    let layers = bfs_layers(upsilon, root, n_max)?;
    let reach = layers.reliable_depth();
    let nash_williams = nash_williams_sum(&layers)?;
    let resistance = resistance_curve(upsilon, root, &default_radii(reach))?;
    let verdict = resistance_verdict(&resistance);
    Ok(DoyleReport {
        not_speiser,
        vertex_count: upsilon.vertex_count(),
        reliable_depth: reach,
        max_interior_degree: upsilon.max_interior_degree(),
        sphere_sizes: layers.sphere_sizes()[..=reach].to_vec(),
        cut_sizes: layers.cut_sizes()[..reach].to_vec(),
        nash_williams,
        resistance,
        verdict,
    })
}
