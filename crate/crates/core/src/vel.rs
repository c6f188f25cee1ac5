//! Vertex extremal length between two vertex sets of a finite graph.
//!
//! `VEL(A, B) = sup_m dist_m(A, B)^2 / area(m)` where the length of a path is
//! the sum of `m` over its vertices (both ends included) and the area is
//! `sum m^2`. The solver minimises the area subject to unit length on a
//! growing family of shortest paths (dual coordinate ascent), and brackets
//! the optimum between an explicit metric and a family of disjoint paths.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bfs_layers, RotationGraph, VertexId};
use crate::refinement::VMetric;
use crate::trend::{linear_vs_geometric, Growth};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Objective {
    /// Shortest `m`-length of an `A`-`B` path; infinite when none exists.
    pub dist: f64,
    pub area: f64,
    /// `dist^2 / area`, 0 for the zero metric.
    pub ratio: f64,
}

#[derive(Clone, Copy, PartialEq)]
struct HeapItem(f64, usize);

impl Eq for HeapItem {}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Compact adjacency of the allowed vertices.
struct Net {
    adj: Vec<Vec<usize>>,
    global: Vec<VertexId>,
    a: Vec<usize>,
    is_b: Vec<bool>,
}

impl Net {
    fn new(
        g: &RotationGraph,
        a: &[VertexId],
        b: &[VertexId],
        allowed: Option<&[bool]>,
    ) -> Result<Self> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::InvalidArgument("A and B must be non-empty".into()));
        }
        let n = g.vertex_count();
        if let Some(&v) = a.iter().chain(b).find(|&&v| v >= n) {
            return Err(Error::UnknownVertex(v));
        }
        let in_a: HashSet<_> = a.iter().copied().collect();
        let in_b: HashSet<_> = b.iter().copied().collect();
        if in_a.intersection(&in_b).next().is_some() {
            return Err(Error::InvalidArgument("A and B must be disjoint".into()));
        }
        let ok = |v: usize| allowed.is_none_or(|m| m[v]) || in_a.contains(&v) || in_b.contains(&v);
        let mut local = vec![usize::MAX; n];
        let mut global = Vec::new();
        for v in g.vertices().filter(|&v| ok(v)) {
            local[v] = global.len();
            global.push(v);
        }
        let adj = global
            .iter()
            .map(|&v| {
                let mut ns: Vec<usize> = g
                    .neighbors(v)
                    .filter(|&w| local[w] != usize::MAX)
                    .map(|w| local[w])
                    .collect();
                ns.sort_unstable();
                ns.dedup();
                ns
            })
            .collect();
        let mut is_b = vec![false; global.len()];
        for &v in b {
            is_b[local[v]] = true;
        }
        let mut a_local: Vec<usize> = a.iter().map(|&v| local[v]).collect();
        a_local.sort_unstable();
        a_local.dedup();
        Ok(Self {
            adj,
            global,
            a: a_local,
            is_b,
        })
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    /// Vertex-weighted multi-source Dijkstra from `A`. Does not expand past B.
    fn dijkstra(&self, m: &[f64]) -> (Vec<f64>, Vec<usize>) {
        let n = self.len();
        let mut dist = vec![f64::INFINITY; n];
        let mut pred = vec![usize::MAX; n];
        let mut heap = BinaryHeap::new();
        for &s in &self.a {
            dist[s] = m[s];
            heap.push(HeapItem(m[s], s));
        }
        while let Some(HeapItem(d, v)) = heap.pop() {
            if d > dist[v] || self.is_b[v] {
                continue;
            }
            for &w in &self.adj[v] {
                let nd = d + m[w];
                if nd < dist[w] {
                    dist[w] = nd;
                    pred[w] = v;
                    heap.push(HeapItem(nd, w));
                }
            }
        }
        (dist, pred)
    }

    fn shortest(&self, m: &[f64]) -> f64 {
        let (dist, _) = self.dijkstra(m);
        (0..self.len())
            .filter(|&v| self.is_b[v])
            .map(|v| dist[v])
            .fold(f64::INFINITY, f64::min)
    }

    fn trace(pred: &[usize], mut v: usize) -> Vec<usize> {
        let mut path = vec![v];
        while pred[v] != usize::MAX {
            v = pred[v];
            path.push(v);
        }
        path.reverse();
        path
    }

    /// Greedy family of vertex-disjoint `A`-`B` paths, each a fewest-vertex
    /// path among the vertices still unused.
    fn disjoint_paths(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut used = vec![false; n];
        let mut family = Vec::new();
        loop {
            let mut pred = vec![usize::MAX; n];
            let mut seen = used.clone();
            let mut queue = VecDeque::new();
            for &s in &self.a {
                if !seen[s] {
                    seen[s] = true;
                    queue.push_back(s);
                }
            }
            let mut hit = None;
            while let Some(v) = queue.pop_front() {
                if self.is_b[v] {
                    hit = Some(v);
                    break;
                }
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        pred[w] = v;
                        queue.push_back(w);
                    }
                }
            }
            let Some(end) = hit else { break };
            let path = Self::trace(&pred, end);
            for &v in &path {
                used[v] = true;
            }
            family.push(path);
        }
        family
    }
}

/// Length, area and their ratio for the metric `m`.
pub fn metric_objective(
    g: &RotationGraph,
    a: &[VertexId],
    b: &[VertexId],
    m: &VMetric,
) -> Result<Objective> {
    if m.len() != g.vertex_count() {
        return Err(Error::InvalidArgument("metric length differs from vertex count".into()));
    }
    let net = Net::new(g, a, b, None)?;
    let local: Vec<f64> = net.global.iter().map(|&v| m.weights[v]).collect();
    let dist = net.shortest(&local);
    Ok(objective(dist, m.area()))
}

fn objective(dist: f64, area: f64) -> Objective {
    let ratio = if dist.is_infinite() {
        f64::INFINITY
    } else if area > 0.0 {
        dist * dist / area
    } else {
        0.0
    };
    Objective { dist, area, ratio }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Stop once every `A`-`B` path has length at least `1 - tol`.
    pub tol: f64,
    pub max_rounds: usize,
    /// Violated paths added per separation round.
    pub paths_per_round: usize,
    /// Coordinate ascent sweeps over the path family per round.
    pub sweeps_per_round: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            max_rounds: 3000,
            paths_per_round: 64,
            sweeps_per_round: 20,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VelEstimate {
    /// `dist^2 / area` of `metric`.
    pub lower: f64,
    /// `1 / sum_i 1/|P_i|` over the disjoint family `paths`.
    pub upper: f64,
    #[serde(skip)]
    pub metric: Option<VMetric>,
    pub paths: Vec<Vec<VertexId>>,
    pub rounds: usize,
    pub constraints: usize,
    pub converged: bool,
}

/// Brackets `VEL(A, B)`, optionally restricted to the vertices in `allowed`
/// (plus `A` and `B`).
pub fn solve_vel_within(
    g: &RotationGraph,
    a: &[VertexId],
    b: &[VertexId],
    allowed: Option<&[bool]>,
    opts: &SolverOptions,
) -> Result<VelEstimate> {
    let net = Net::new(g, a, b, allowed)?;
    let n = net.len();
    let family = net.disjoint_paths();
    if family.is_empty() {
        return Ok(VelEstimate {
            lower: f64::INFINITY,
            upper: f64::INFINITY,
            metric: None,
            paths: Vec::new(),
            rounds: 0,
            constraints: 0,
            converged: true,
        });
    }
    let upper = 1.0 / family.iter().map(|p| 1.0 / p.len() as f64).sum::<f64>();

    let mut m = vec![0.0; n];
    let mut paths: Vec<Vec<usize>> = Vec::new();
    let mut lambda: Vec<f64> = Vec::new();
    let mut known: HashSet<Vec<usize>> = HashSet::new();
    let mut converged = false;
    let mut rounds = 0;
    while rounds < opts.max_rounds {
        rounds += 1;
        let (dist, pred) = net.dijkstra(&m);
        let mut violated: Vec<(f64, usize)> = (0..n)
            .filter(|&v| net.is_b[v] && dist[v] < 1.0 - opts.tol)
            .map(|v| (dist[v], v))
            .collect();
        if violated.is_empty() {
            converged = true;
            break;
        }
        violated.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
        for &(_, v) in violated.iter().take(opts.paths_per_round) {
            let p = Net::trace(&pred, v);
            if known.insert(p.clone()) {
                paths.push(p);
                lambda.push(0.0);
            }
        }
        for _ in 0..opts.sweeps_per_round {
            for (p, lam) in paths.iter().zip(lambda.iter_mut()) {
                let len: f64 = p.iter().map(|&v| m[v]).sum();
                let step = ((1.0 - len) / p.len() as f64).max(-*lam);
                if step != 0.0 {
                    *lam += step;
                    for &v in p {
                        m[v] += step;
                    }
                }
            }
        }
    }
    let mut weights = vec![0.0; g.vertex_count()];
    for (i, &v) in net.global.iter().enumerate() {
        weights[v] = m[i].max(0.0);
    }
    let local: Vec<f64> = net.global.iter().map(|&v| weights[v]).collect();
    let obj = objective(net.shortest(&local), weights.iter().map(|w| w * w).sum());
    Ok(VelEstimate {
        lower: obj.ratio,
        upper,
        metric: Some(VMetric { weights }),
        paths: family
            .into_iter()
            .map(|p| p.into_iter().map(|v| net.global[v]).collect())
            .collect(),
        rounds,
        constraints: paths.len(),
        converged,
    })
}

pub fn solve_vel(
    g: &RotationGraph,
    a: &[VertexId],
    b: &[VertexId],
    opts: &SolverOptions,
) -> Result<VelEstimate> {
    solve_vel_within(g, a, b, None, opts)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TypeVerdict {
    ParabolicLeaning,
    HyperbolicLeaning,
    Inconclusive,
}

impl From<Growth> for TypeVerdict {
    fn from(g: Growth) -> Self {
        match g {
            Growth::Unbounded => TypeVerdict::ParabolicLeaning,
            Growth::Bounded => TypeVerdict::HyperbolicLeaning,
            Growth::Inconclusive => TypeVerdict::Inconclusive,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnulusResult {
    pub inner: usize,
    pub outer: usize,
    pub lower: f64,
    pub upper: f64,
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TypeTrendReport {
    pub annuli: Vec<AnnulusResult>,
    /// Annuli skipped because they reach the frontier.
    pub excluded: Vec<(usize, usize)>,
    /// Running sums of the per-annulus lower bounds.
    pub cumulative: Vec<f64>,
    pub verdict: TypeVerdict,
}

/// Per-annulus VEL between `S(inner)` and `S(outer)` and a verdict on the
/// growth of the running sum (unbounded: parabolic-leaning).
pub fn vel_type_trend(
    g: &RotationGraph,
    root: VertexId,
    radii: &[(usize, usize)],
    opts: &SolverOptions,
) -> Result<TypeTrendReport> {
    if let Some(&(i, o)) = radii.iter().find(|(i, o)| i >= o || *i == 0) {
        return Err(Error::InvalidArgument(format!("bad annulus ({i}, {o})")));
    }
    let n_max = radii.iter().map(|r| r.1).max().unwrap_or(0);
    let layers = bfs_layers(g, root, n_max)?;
    let reliable = layers.reliable_depth();
    let (kept, excluded): (Vec<_>, Vec<_>) = radii.iter().partition(|r| r.1 <= reliable);
    let mut depth = vec![usize::MAX; g.vertex_count()];
    for (k, s) in layers.spheres.iter().enumerate() {
        for &v in s {
            depth[v] = k;
        }
    }
    let annuli = kept
        .par_iter()
        .map(|&&(inner, outer)| {
            let allowed: Vec<bool> = depth.iter().map(|&d| d >= inner && d <= outer).collect();
            let est = solve_vel_within(
                g,
                &layers.spheres[inner],
                &layers.spheres[outer],
                Some(&allowed),
                opts,
            )?;
            Ok(AnnulusResult {
                inner,
                outer,
                lower: est.lower,
                upper: est.upper,
                converged: est.converged,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let cumulative: Vec<f64> = annuli
        .iter()
        .scan(0.0, |acc, a| {
            *acc += a.lower;
            Some(*acc)
        })
        .collect();
    let xs: Vec<f64> = (1..=cumulative.len()).map(|k| k as f64).collect();
    Ok(TypeTrendReport {
        verdict: linear_vs_geometric(&xs, &cumulative).into(),
        annuli,
        excluded: excluded.into_iter().copied().collect(),
        cumulative,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;
    use crate::lattice;

    /// `A - x_i - B` for `i < k`: vertex 0 is A, 1 is B.
    fn gadget(k: usize) -> RotationGraph {
        let mut lists = vec![Vec::new(); 2 + k];
        for i in 0..k {
            lists[0].push(2 + i);
            lists[2 + i] = vec![1, 0];
        }
        lists[1] = (0..k).rev().map(|i| 2 + i).collect();
        GraphBuilder::from_ccw_neighbors(&lists).unwrap()
    }

    #[test]
    fn objective_on_a_path() {
        let g = lattice::path(2);
        let ones = VMetric::new(vec![1.0; 3]).unwrap();
        let o = metric_objective(&g, &[0], &[2], &ones).unwrap();
        assert_eq!((o.dist, o.area, o.ratio), (3.0, 3.0, 3.0));
        let o = metric_objective(&g, &[0], &[2], &VMetric::zeros(3)).unwrap();
        assert_eq!(o.ratio, 0.0);
    }

    #[test]
    fn objective_on_grid() {
        let (g, _) = lattice::square_grid(1);
        let left: Vec<_> = (0..3).map(|y| 3 * y).collect();
        let right: Vec<_> = (0..3).map(|y| 3 * y + 2).collect();
        let o = metric_objective(&g, &left, &right, &VMetric::new(vec![1.0; 9]).unwrap()).unwrap();
        assert_eq!((o.dist, o.area, o.ratio), (3.0, 9.0, 1.0));
    }

    #[test]
    fn bad_sets_rejected() {
        let g = lattice::path(2);
        let m = VMetric::zeros(3);
        assert!(metric_objective(&g, &[], &[2], &m).is_err());
        assert!(metric_objective(&g, &[0, 1], &[1], &m).is_err());
    }

    #[test]
    fn no_path_is_infinite() {
        let g = lattice::path(4);
        let mut allowed = vec![true; 5];
        allowed[2] = false;
        let est = solve_vel_within(&g, &[0], &[4], Some(&allowed), &SolverOptions::default()).unwrap();
        assert!(est.lower.is_infinite() && est.upper.is_infinite());
    }

    #[test]
    fn single_internal_vertex() {
        let g = gadget(1);
        let est = solve_vel(&g, &[0], &[1], &SolverOptions::default()).unwrap();
        assert!(est.converged);
        assert!((est.lower - 3.0).abs() < 1e-5, "{}", est.lower);
        assert!((est.upper - 3.0).abs() < 1e-12);
        let m = est.metric.unwrap();
        for w in &m.weights {
            assert!((w - 1.0 / 3.0).abs() < 1e-5);
        }
    }

    #[test]
    fn two_internal_vertices() {
        let est = solve_vel(&gadget(2), &[0], &[1], &SolverOptions::default()).unwrap();
        // Optimum: 2/5 on A and B, 1/5 on each middle vertex.
        assert!((est.lower - 2.5).abs() < 1e-5, "{}", est.lower);
        assert!(est.lower <= est.upper);
        assert!(est.lower < 3.0);
    }

    #[test]
    fn lower_matches_recomputed_objective() {
        let (g, c) = lattice::square_grid(4);
        let layers = bfs_layers(&g, c, 4).unwrap();
        let est = solve_vel(&g, &layers.spheres[1], &layers.spheres[3], &SolverOptions::default())
            .unwrap();
        let m = est.metric.clone().unwrap();
        let o = metric_objective(&g, &layers.spheres[1], &layers.spheres[3], &m).unwrap();
        assert!((o.ratio - est.lower).abs() <= 1e-9 * est.lower);
        assert!(est.lower <= est.upper + 1e-12);
        // Paths in the family are vertex-disjoint.
        let mut seen = HashSet::new();
        assert!(est.paths.iter().flatten().all(|v| seen.insert(*v)));
    }

    #[test]
    fn serial_rule() {
        let g = lattice::hex_ball(7);
        let layers = bfs_layers(&g, 0, 6).unwrap();
        let opts = SolverOptions::default();
        let s = &layers.spheres;
        let inner = solve_vel(&g, &s[1], &s[2], &opts).unwrap().lower;
        let outer = solve_vel(&g, &s[3], &s[5], &opts).unwrap().lower;
        let whole = solve_vel(&g, &s[1], &s[5], &opts).unwrap().lower;
        assert!(whole >= inner + outer - 1e-3, "{whole} < {inner} + {outer}");
    }

    #[test]
    fn single_annulus_is_inconclusive() {
        let g = lattice::hex_ball(5);
        let r = vel_type_trend(&g, 0, &[(1, 2)], &SolverOptions::default()).unwrap();
        assert_eq!(r.verdict, TypeVerdict::Inconclusive);
        assert_eq!(r.annuli.len(), 1);
        let r = vel_type_trend(&g, 0, &[(1, 2), (3, 6)], &SolverOptions::default()).unwrap();
        assert_eq!(r.excluded, vec![(3, 6)]);
    }
}
