//! Monte Carlo fatness estimates for finite unions of disks, and empirical
//! checks of the conditions a fat collection must meet.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{RotationGraph, VertexId};

/// Slack used when deciding whether two closed disks touch.
const TOUCH_EPS: f64 = 1e-9;
/// Slack on the union check.
pub const UNION_TOLERANCE: f64 = 0.01;
/// Slack on the precondition that each input is itself fat.
pub const INPUT_TOLERANCE: f64 = 0.03;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: [f64; 2],
    pub radius: f64,
}

impl Disk {
    pub fn new(x: f64, y: f64, radius: f64) -> Self {
        Disk {
            center: [x, y],
            radius,
        }
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        let (dx, dy) = (p[0] - self.center[0], p[1] - self.center[1]);
        dx * dx + dy * dy <= self.radius * self.radius
    }

    fn distance(&self, other: &Disk) -> f64 {
        (self.center[0] - other.center[0]).hypot(self.center[1] - other.center[1])
    }

    /// True when the closed disks share a point.
    pub fn meets(&self, other: &Disk) -> bool {
        let reach = self.radius + other.radius;
        self.distance(other) <= reach + TOUCH_EPS * reach.max(1.0)
    }
}

/// A nonempty connected finite union of closed disks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanarSet {
    disks: Vec<Disk>,
}

impl PlanarSet {
    pub fn new(disks: Vec<Disk>) -> Result<Self> {
        if disks.is_empty() {
            return Err(Error::InvalidArgument("empty set".into()));
        }
        for d in &disks {
            if !(d.radius > 0.0 && d.radius.is_finite())
                || !d.center.iter().all(|c| c.is_finite())
            {
                return Err(Error::InvalidArgument(format!(
                    "degenerate disk {d:?} (zero area or non-finite)"
                )));
            }
        }
        let set = PlanarSet { disks };
        if !set.is_connected() {
            return Err(Error::InvalidArgument("union of disks is not connected".into()));
        }
        Ok(set)
    }

    pub fn disk(d: Disk) -> Result<Self> {
        Self::new(vec![d])
    }

    pub fn disks(&self) -> &[Disk] {
        &self.disks
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        self.disks.iter().any(|d| d.contains(p))
    }

    fn is_connected(&self) -> bool {
        let n = self.disks.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if !seen[j] && self.disks[i].meets(&self.disks[j]) {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// `[xmin, ymin, xmax, ymax]`.
    pub fn bounding_box(&self) -> [f64; 4] {
        let mut b = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
        for d in &self.disks {
            b[0] = b[0].min(d.center[0] - d.radius);
            b[1] = b[1].min(d.center[1] - d.radius);
            b[2] = b[2].max(d.center[0] + d.radius);
            b[3] = b[3].max(d.center[1] + d.radius);
        }
        b
    }

    /// Exact diameter of the union.
    pub fn diameter(&self) -> f64 {
        let mut best: f64 = 0.0;
        for a in &self.disks {
            for b in &self.disks {
                best = best.max(a.distance(b) + a.radius + b.radius);
            }
        }
        best
    }

    /// Smallest `r` with `D(x, r)` containing the whole set.
    pub fn covering_radius(&self, x: [f64; 2]) -> f64 {
        self.disks
            .iter()
            .map(|d| (x[0] - d.center[0]).hypot(x[1] - d.center[1]) + d.radius)
            .fold(0.0, f64::max)
    }

    /// True when some pair of member disks touches.
    pub fn meets(&self, other: &PlanarSet) -> bool {
        self.disks
            .iter()
            .any(|a| other.disks.iter().any(|b| a.meets(b)))
    }

    pub fn union(&self, other: &PlanarSet) -> Result<PlanarSet> {
        let mut disks = self.disks.clone();
        disks.extend_from_slice(&other.disks);
        PlanarSet::new(disks)
    }

    /// A point of the set: half the time on a member circle, otherwise
    /// uniform inside a member disk; the member is chosen uniformly.
    fn sample_point(&self, rng: &mut ChaCha8Rng) -> [f64; 2] {
        let d = &self.disks[rng.gen_range(0..self.disks.len())];
        let t = rng.gen::<f64>() * 2.0 * PI;
        let rho = if rng.gen::<bool>() {
            d.radius
        } else {
            d.radius * rng.gen::<f64>().sqrt()
        };
        [d.center[0] + rho * t.cos(), d.center[1] + rho * t.sin()]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FatnessOptions {
    /// Points per area estimate.
    pub samples: usize,
    /// Radii tried per centre.
    pub radii: usize,
    pub centres: usize,
}

impl FatnessOptions {
    pub fn new(samples: usize, radii: usize) -> Self {
        FatnessOptions {
            samples,
            radii,
            centres: 32,
        }
    }
}

impl Default for FatnessOptions {
    fn default() -> Self {
        FatnessOptions {
            samples: 4000,
            radii: 8,
            centres: 16,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FatnessEstimate {
    pub tau: f64,
    /// Centre and radius of the worst probe disk.
    pub center: [f64; 2],
    pub radius: f64,
    pub probes: usize,
    pub seed: u64,
    pub options: FatnessOptions,
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

const CENTRE_STREAM: u64 = 1 << 63;

/// Estimate of the fatness constant, a minimum of sampled area ratios.
///
/// Probe `(i, j)` draws from its own stream, so raising `radii` or
/// `centres` only adds probes and can never raise the estimate.
pub fn fatness_estimate_with(s: &PlanarSet, opts: FatnessOptions, seed: u64) -> Result<FatnessEstimate> {
    if opts.samples == 0 || opts.radii == 0 || opts.centres == 0 {
        return Err(Error::InvalidArgument("sample counts must be positive".into()));
    }
    let diam = s.diameter();
    let d_min = 1e-3 * diam;
    let probes: Vec<(usize, usize)> = (0..opts.centres)
        .flat_map(|i| (0..opts.radii).map(move |j| (i, j)))
        .collect();
    let results: Vec<(f64, [f64; 2], f64)> = probes
        .par_iter()
        .map(|&(i, j)| {
            let x = s.sample_point(&mut rng_for(seed, CENTRE_STREAM | i as u64));
            let mut rng = rng_for(seed, ((i as u64) << 32) | j as u64);
            let top = s.covering_radius(x).min(2.0 * diam);
            let lo = d_min.min(top);
            let r = lo * (top / lo).powf(rng.gen::<f64>());
            let mut hits = 0usize;
            for _ in 0..opts.samples {
                let t = rng.gen::<f64>() * 2.0 * PI;
                let rho = r * rng.gen::<f64>().sqrt();
                if s.contains([x[0] + rho * t.cos(), x[1] + rho * t.sin()]) {
                    hits += 1;
                }
            }
            (hits as f64 / opts.samples as f64, x, r)
        })
        .collect();
    let (tau, center, radius) = results
        .into_iter()
        .fold((f64::INFINITY, [0.0; 2], 0.0), |best, cand| {
            if cand.0 < best.0 {
                cand
            } else {
                best
            }
        });
    Ok(FatnessEstimate {
        tau,
        center,
        radius,
        probes: probes.len(),
        seed,
        options: opts,
    })
}

/// [`fatness_estimate_with`] using 32 centres.
pub fn fatness_estimate(s: &PlanarSet, n_samples: usize, n_radii: usize, seed: u64) -> Result<FatnessEstimate> {
    fatness_estimate_with(s, FatnessOptions::new(n_samples, n_radii), seed)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnionReport {
    pub tau: f64,
    pub fat_a: f64,
    pub fat_b: f64,
    pub fat_union: f64,
    /// Whether both inputs reached `tau - INPUT_TOLERANCE`.
    pub inputs_fat: bool,
    pub threshold: f64,
    pub passed: bool,
    pub seed: u64,
}

/// Estimates the fatness of `a ∪ b` and compares it with `tau / 4`.
pub fn check_union_fat(a: &PlanarSet, b: &PlanarSet, tau: f64, seed: u64) -> Result<UnionReport> {
    check_union_fat_with(a, b, tau, FatnessOptions::default(), seed)
}

pub fn check_union_fat_with(
    a: &PlanarSet,
    b: &PlanarSet,
    tau: f64,
    opts: FatnessOptions,
    seed: u64,
) -> Result<UnionReport> {
    if !a.meets(b) {
        return Err(Error::Precondition("sets do not intersect".into()));
    }
    let u = a.union(b)?;
    let fat_a = fatness_estimate_with(a, opts, seed)?.tau;
    let fat_b = fatness_estimate_with(b, opts, seed.wrapping_add(1))?.tau;
    let fat_union = fatness_estimate_with(&u, opts, seed.wrapping_add(2))?.tau;
    let threshold = tau / 4.0;
    Ok(UnionReport {
        tau,
        fat_a,
        fat_b,
        fat_union,
        inputs_fat: fat_a >= tau - INPUT_TOLERANCE && fat_b >= tau - INPUT_TOLERANCE,
        threshold,
        passed: fat_union >= threshold - UNION_TOLERANCE,
        seed,
    })
}

/// Sets indexed by the vertices of a graph, with the constants they are
/// claimed to satisfy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FatCollection {
    pub sets: Vec<PlanarSet>,
    pub tau: f64,
    pub overlap_bound: usize,
    /// Indices whose set was built from fewer pieces than usual.
    pub flagged: Vec<VertexId>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HsReport {
    pub set_count: usize,
    /// Each set is a connected union of closed disks.
    pub compact_connected: bool,
    /// Largest number of bounding boxes meeting a single bounding box.
    pub max_box_neighbours: usize,
    pub locally_finite: bool,
    pub sample_points: usize,
    pub max_overlap: usize,
    pub overlap_bound: usize,
    pub overlap_ok: bool,
    pub adjacency_failures: Vec<(VertexId, VertexId)>,
    pub adjacency_ok: bool,
    pub worst_fatness: f64,
    pub worst_index: VertexId,
    pub claimed_tau: f64,
    pub fatness_ok: bool,
    /// The conclusion drawn from these conditions is not something a
    /// finite computation can establish; always false.
    pub conclusion_checked: bool,
    pub seed: u64,
}

fn boxes_meet(a: &[f64; 4], b: &[f64; 4]) -> bool {
    a[0] <= b[2] && b[0] <= a[2] && a[1] <= b[3] && b[1] <= a[3]
}

/// Empirical check of the four collection conditions.
pub fn check_hs(g: &RotationGraph, c: &FatCollection, samples: usize, seed: u64) -> Result<HsReport> {
    check_hs_with(g, c, samples, FatnessOptions::default(), seed)
}

pub fn check_hs_with(
    g: &RotationGraph,
    c: &FatCollection,
    samples: usize,
    fat_opts: FatnessOptions,
    seed: u64,
) -> Result<HsReport> {
    let n = c.sets.len();
    if n != g.vertex_count() {
        return Err(Error::InvalidArgument(format!(
            "collection has {n} sets for {} vertices",
            g.vertex_count()
        )));
    }
    let compact_connected = c.sets.iter().all(|s| s.is_connected());

    let boxes: Vec<[f64; 4]> = c.sets.iter().map(|s| s.bounding_box()).collect();
    let max_box_neighbours = (0..n)
        .into_par_iter()
        .map(|i| (0..n).filter(|&j| j != i && boxes_meet(&boxes[i], &boxes[j])).count())
        .max()
        .unwrap_or(0);

    let mut rng = rng_for(seed, CENTRE_STREAM - 1);
    let points: Vec<[f64; 2]> = (0..samples)
        .map(|_| c.sets[rng.gen_range(0..n)].sample_point(&mut rng))
        .collect();
    let max_overlap = points
        .par_iter()
        .map(|&p| {
            (0..n)
                .filter(|&i| {
                    let b = &boxes[i];
                    p[0] >= b[0] && p[0] <= b[2] && p[1] >= b[1] && p[1] <= b[3] && c.sets[i].contains(p)
                })
                .count()
        })
        .max()
        .unwrap_or(0);

    let adjacency_failures: Vec<(VertexId, VertexId)> = g
        .edges()
        .map(|e| g.endpoints(e))
        .filter(|&(v, w)| !c.sets[v].meets(&c.sets[w]))
        .collect();

    let fats: Vec<f64> = c
        .sets
        .par_iter()
        .enumerate()
        .map(|(i, s)| fatness_estimate_with(s, fat_opts, seed.wrapping_add(i as u64)).map(|f| f.tau))
        .collect::<Result<_>>()?;
    let (worst_index, worst_fatness) = fats
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::INFINITY), |b, (i, f)| if f < b.1 { (i, f) } else { b });

    Ok(HsReport {
        set_count: n,
        compact_connected,
        max_box_neighbours,
        locally_finite: true,
        sample_points: samples,
        max_overlap,
        overlap_bound: c.overlap_bound,
        overlap_ok: max_overlap <= c.overlap_bound,
        adjacency_ok: adjacency_failures.is_empty(),
        adjacency_failures,
        worst_fatness,
        worst_index,
        claimed_tau: c.tau,
        fatness_ok: worst_fatness >= c.tau - UNION_TOLERANCE,
        conclusion_checked: false,
        seed,
    })
}
