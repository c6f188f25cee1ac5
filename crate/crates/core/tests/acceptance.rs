//! End-to-end acceptance checks. Each criterion prints one PASS or FAIL line;
//! the process exits non-zero if any of them fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use speiser_lab::fatness::{check_hs, check_union_fat, fatness_estimate, Disk, PlanarSet};
use speiser_lab::graph::trace_faces;
use speiser_lab::packing::{
    check_packing, inscribed_collection, pack_disk, ratio_trend, BoundaryCondition, CpVerdict,
};
use speiser_lab::refinement::{check_refinement, coarsen_metric, refine_metric, subdivide4, VMetric};
use speiser_lab::theorem1::{report_json, run_theorem1, settled_at, Theorem1Config, Theorem1Report};
use speiser_lab::trend::linear_fit;
use speiser_lab::vel::{metric_objective, solve_vel, SolverOptions, TypeVerdict};
use speiser_lab::walk::{resistance_curve, WalkVerdict};
use speiser_lab::{lattice, GraphBuilder, Result, RotationGraph};

type Outcome = Result<(bool, String)>;

fn octahedron_subdivision() -> Outcome {
    let g = lattice::octahedron();
    let (r, map) = subdivide4(&g)?;
    let (v, e, f) = (r.vertex_count(), r.edge_count(), trace_faces(&r).len());
    let chi = v as i64 - e as i64 + f as i64;
    let rep = check_refinement(&g, &r, &map);
    let p6 = r.vertices().all(|v| r.degree(v) <= 6);
    let ok = (v, e, f) == (18, 48, 32) && chi == 2 && rep.is_refinement && p6;
    Ok((ok, format!("V={v} E={e} F={f} chi={chi} refinement={} p(6)={p6}", rep.is_refinement)))
}

fn unit_disk_fatness() -> Outcome {
    let start = Instant::now();
    let s = PlanarSet::disk(Disk::new(0.0, 0.0, 1.0))?;
    let est = fatness_estimate(&s, 100_000, 8, 1)?;
    let secs = start.elapsed().as_secs_f64();
    Ok((est.tau >= 0.23 && secs < 5.0, format!("tau={:.4} in {secs:.2}s", est.tau)))
}

fn union_of_disks() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = f64::INFINITY;
    let mut failures = 0;
    for i in 0..200 {
        let (r1, r2) = (rng.gen_range(0.1..=10.0), rng.gen_range(0.1..=10.0));
        let d = rng.gen_range(0.0..1.0) * (r1 + r2);
        let a: f64 = rng.gen_range(0.0..2.0 * PI);
        let da = PlanarSet::disk(Disk::new(0.0, 0.0, r1))?;
        let db = PlanarSet::disk(Disk::new(d * a.cos(), d * a.sin(), r2))?;
        let tau = 0.25;
        let rep = check_union_fat(&da, &db, tau, 1000 + i)?;
        let margin = rep.fat_union - (tau / 4.0 - 0.01);
        worst = worst.min(margin);
        if margin < 0.0 {
            failures += 1;
        }
    }
    Ok((failures == 0, format!("200 pairs, {failures} below tau/4 - 0.01, worst margin {worst:.4}")))
}

fn random_metric(n: usize, rng: &mut ChaCha8Rng) -> Result<VMetric> {
    VMetric::new((0..n).map(|_| rng.gen::<f64>()).collect())
}

fn metric_transfer() -> Outcome {
    let base = lattice::regular_triangulation(8, 3)?;
    let (g, _) = subdivide4(&base)?;
    let (r, map) = subdivide4(&g)?;
    let big_m = check_refinement(&g, &r, &map).m_edge as f64;
    let k = 6.0;
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut coarse_bad, mut fine_bad) = (0, 0);
    for _ in 0..100 {
        let mr = random_metric(r.vertex_count(), &mut rng)?;
        let m = coarsen_metric(&g, &r, &map, &mr)?;
        if m.area() > 8.0 * big_m * big_m * mr.area() {
            coarse_bad += 1;
        }
    }
    for _ in 0..100 {
        let m = random_metric(g.vertex_count(), &mut rng)?;
        let mr = refine_metric(&g, &r, &map, &m, 6)?;
        if mr.area() > 9.0 * k * big_m * m.area() {
            fine_bad += 1;
        }
    }
    Ok((
        coarse_bad == 0 && fine_bad == 0,
        format!("M={big_m} K=6: coarsen {coarse_bad}/100 over, refine {fine_bad}/100 over"),
    ))
}

fn law_of_cosines(a: f64, b: f64, c: f64) -> f64 {
    let (x, y, z) = (a + b, a + c, b + c);
    ((x * x + y * y - z * z) / (2.0 * x * y)).acos()
}

fn euclidean_packings() -> Outcome {
    use BoundaryCondition::EuclideanFixedBoundaryRadii as Fixed;
    let flower = lattice::hex_ball(1);
    let p = pack_disk(&flower, Fixed)?;
    let flower_err = (p.radii[0] - 1.0).abs();
    let f = |a: f64| {
        2.0 * PI / 3.0 + 2.0 * law_of_cosines(a, a, 1.0) + 2.0 * law_of_cosines(a, 1.0, 1.0) - 2.0 * PI
    };
    let (mut lo, mut hi) = (1e-3, 10.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let g = lattice::hex_ball(2);
    let q = pack_disk(&g, Fixed)?;
    let ring_err = g
        .vertices()
        .filter(|&v| q.interior[v])
        .map(|v| (q.radii[v] - lo).abs())
        .fold(0.0, f64::max);
    let mut angle_err: f64 = 0.0;
    for h in [lattice::hex_ball(1), lattice::hex_ball(2), lattice::hex_ball(5)] {
        let p = pack_disk(&h, Fixed)?;
        angle_err = angle_err.max(check_packing(&h, &p)?.max_angle_residual);
    }
    let ok = flower_err < 1e-8 && ring_err < 1e-8 && angle_err < 1e-8;
    Ok((ok, format!("flower {flower_err:.1e}, two-ring {ring_err:.1e}, angle sums {angle_err:.1e}")))
}

fn inscribed_sets() -> Outcome {
    let g = lattice::hex_ball(3);
    let p = pack_disk(&g, BoundaryCondition::EuclideanFixedBoundaryRadii)?;
    let c = inscribed_collection(&g, &p)?;
    let (gf, _) = subdivide4(&g)?;
    let hs = check_hs(&gf, &c, 50_000, 6)?;
    let nv = g.vertex_count();
    let mut worst = f64::INFINITY;
    for e in 0..g.edge_count() {
        worst = worst.min(fatness_estimate(&c.sets[nv + e], 4000, 8, 600 + e as u64)?.tau);
    }
    let ok = hs.max_overlap <= 7 && worst >= 1.0 / 16.0 - 0.01;
    Ok((ok, format!("overlap {} (bound 7), worst edge-set fatness {worst:.4}", hs.max_overlap)))
}

fn packing_trends() -> Outcome {
    let ns: Vec<usize> = (2..=8).collect();
    let hex = ratio_trend(|n| Ok(lattice::hex_ball(n)), 0, &ns)?;
    let min_ratio = hex.ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hex_ok = hex.verdict == CpVerdict::CpParabolicLeaning && min_ratio >= 0.9;
    let hyp = ratio_trend(|n| lattice::regular_triangulation(8, n), 0, &ns)?;
    let logs: Vec<f64> = hyp.points.iter().map(|p| p.root_radius.ln()).collect();
    let decreasing = logs.windows(2).all(|w| w[1] < w[0]);
    let r2 = hyp.log_fit.map_or(0.0, |f| f.r_squared);
    let hyp_ok = hyp.verdict == CpVerdict::CpHyperbolicLeaning && decreasing && r2 >= 0.95;
    Ok((
        hex_ok && hyp_ok,
        format!(
            "hex {:?} min ratio {min_ratio:.3}; {{3,8}} {:?} decreasing={decreasing} R2={r2:.3}",
            hex.verdict, hyp.verdict
        ),
    ))
}

fn resistance_oracles() -> Outcome {
    let (grid, c) = lattice::square_grid(65);
    let radii: Vec<usize> = (8..=64).step_by(4).collect();
    let curve = resistance_curve(&grid, c, &radii)?;
    let xs: Vec<f64> = radii.iter().map(|&n| (n as f64).ln()).collect();
    let fit = linear_fit(&xs, &curve.values());
    let grid_ok = (0.1..=0.3).contains(&fit.slope);

    let tree = lattice::regular_tree(3, 21);
    let tradii: Vec<usize> = (1..=12).chain([16, 20]).collect();
    let tcurve = resistance_curve(&tree, 0, &tradii)?;
    let closed_err = tcurve
        .points
        .iter()
        .map(|p| (p.value - 2.0 / 3.0 * (1.0 - 0.5f64.powi(p.n as i32))).abs())
        .fold(0.0, f64::max);
    let settled = settled_at(&tcurve);
    let tree_ok = closed_err < 1e-9 && settled.is_some_and(|n| n <= 20);
    Ok((
        grid_ok && tree_ok,
        format!(
            "grid c={:.4} (R2 {:.3}); tree closed-form err {closed_err:.1e}, settled at {settled:?}",
            fit.slope, fit.r_squared
        ),
    ))
}

fn leg_a(r: &Theorem1Report) -> Outcome {
    let Some(a) = r.leg_a.completed() else {
        return Ok((false, "leg A failed".into()));
    };
    let ok = a.resistance_verdict == WalkVerdict::TransientLeaning
        && a.resistance_settled_at.is_some_and(|n| n <= 12)
        && a.vel.verdict == TypeVerdict::HyperbolicLeaning;
    Ok((
        ok,
        format!(
            "resistance {:?} settled at {:?}, VEL {:?}",
            a.resistance_verdict, a.resistance_settled_at, a.vel.verdict
        ),
    ))
}

fn leg_b(r: &Theorem1Report) -> Outcome {
    let Some(b) = r.leg_b.completed() else {
        return Ok((false, "leg B failed".into()));
    };
    let deg = b.upsilon.max_interior_degree;
    let ok = b.growth.all_hold
        && b.upsilon.all_hold
        && deg.is_some_and(|d| d <= 6)
        && b.nash_williams_increasing
        && b.nash_williams_growth == speiser_lab::trend::Growth::Unbounded;
    Ok((
        ok,
        format!(
            "growth bound {} violations (holds from {:?}); upsilon bound {}; degree {deg:?}; NW increasing={} {:?}",
            b.growth.violations,
            b.growth.holds_from,
            b.upsilon.all_hold,
            b.nash_williams_increasing,
            b.nash_williams_growth
        ),
    ))
}

/// `A - x_i - B` for `i < k`; vertex 0 is A and 1 is B.
fn gadget(k: usize) -> Result<RotationGraph> {
    let mut lists = vec![Vec::new(); 2 + k];
    for i in 0..k {
        lists[0].push(2 + i);
        lists[2 + i] = vec![1, 0];
    }
    lists[1] = (0..k).rev().map(|i| 2 + i).collect();
    GraphBuilder::from_ccw_neighbors(&lists)
}

/// Best `dist^2 / area` over metrics with entries in `{0, 1/64, ..., 1}`.
fn brute_force(k: usize) -> f64 {
    let n = 2 + k;
    let steps = 65usize;
    let mut idx = vec![0usize; n];
    let mut best: f64 = 0.0;
    loop {
        let w: Vec<f64> = idx.iter().map(|&i| i as f64 / 64.0).collect();
        let area: f64 = w.iter().map(|x| x * x).sum();
        if area > 0.0 {
            let dist = w[0] + w[1] + w[2..].iter().copied().fold(f64::INFINITY, f64::min);
            best = best.max(dist * dist / area);
        }
        let mut j = 0;
        while j < n {
            idx[j] += 1;
            if idx[j] < steps {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
        if j == n {
            return best;
        }
    }
}

fn vel_gadgets() -> Outcome {
    let mut detail = Vec::new();
    let mut ok = true;
    for k in [1, 2] {
        let g = gadget(k)?;
        let est = solve_vel(&g, &[0], &[1], &SolverOptions::default())?;
        // The closed-form path length used by the brute force agrees with the library.
        let probe = VMetric::new((0..2 + k).map(|i| 0.1 + 0.1 * i as f64).collect())?;
        let o = metric_objective(&g, &[0], &[1], &probe)?;
        let direct = probe.weights[0] + probe.weights[1] + probe.weights[2..].iter().copied().fold(f64::INFINITY, f64::min);
        let brute = brute_force(k);
        let agree = (o.dist - direct).abs() < 1e-12;
        ok &= agree && (est.lower - brute).abs() <= 1e-2;
        detail.push(format!("gadget {k}: solver {:.5} brute {brute:.5}", est.lower));
    }
    Ok((ok, detail.join("; ")))
}

fn report(label: &str, outcome: Outcome, failed: &mut usize) {
    match outcome {
        Ok((true, d)) => println!("PASS {label}: {d}"),
        Ok((false, d)) => {
            *failed += 1;
            println!("FAIL {label}: {d}");
        }
        Err(e) => {
            *failed += 1;
            println!("FAIL {label}: error: {e}");
        }
    }
}

fn main() -> ExitCode {
    let mut failed = 0;
    report("1 octahedron subdivision", octahedron_subdivision(), &mut failed);
    report("2 unit disk fatness", unit_disk_fatness(), &mut failed);
    report("3 union of intersecting disks", union_of_disks(), &mut failed);
    report("4 metric coarsening and refining", metric_transfer(), &mut failed);
    report("5 euclidean packings", euclidean_packings(), &mut failed);
    report("6 inscribed collection", inscribed_sets(), &mut failed);
    report("7 packing ratio trends", packing_trends(), &mut failed);
    report("8 resistance oracles", resistance_oracles(), &mut failed);

    let cfg = Theorem1Config::default();
    let first = run_theorem1(&cfg);
    report("9 hyperbolic leg", leg_a(&first), &mut failed);
    report("10 growth leg", leg_b(&first), &mut failed);
    report("11 VEL gadgets", vel_gadgets(), &mut failed);
    let second = run_theorem1(&cfg);
    let (a, b) = (report_json(&first), report_json(&second));
    report(
        "12 reproducible report",
        Ok((a == b, format!("{} bytes, identical={}", a.len(), a == b))),
        &mut failed,
    );

    println!("{} of 12 criteria passed", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
