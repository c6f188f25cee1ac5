//! Least-squares fits used to turn finite sequences into leaning verdicts.

use serde::{Deserialize, Serialize};

/// Minimum number of points before any verdict other than inconclusive.
pub const MIN_POINTS: usize = 4;
/// A model wins only if its residual is at most half the other's.
pub const RESIDUAL_RATIO: f64 = 2.0;
/// Search range for the ratio of a geometric tail.
pub const RHO_RANGE: (f64, f64) = (0.05, 0.8);

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub intercept: f64,
    pub slope: f64,
    /// Sum of squared residuals.
    pub sse: f64,
    pub r_squared: f64,
}

/// Ordinary least squares `y = intercept + slope * x`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> LinearFit {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let sse: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let r_squared = if syy > 0.0 { 1.0 - sse / syy } else { 1.0 };
    LinearFit {
        intercept,
        slope,
        sse,
        r_squared,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometricFit {
    /// Limit `a` of `a - b * rho^k`.
    pub limit: f64,
    pub scale: f64,
    pub rho: f64,
    pub sse: f64,
}

/// Best `y_k = a - b * rho^x_k` with `rho` scanned over [`RHO_RANGE`].
pub fn geometric_fit(xs: &[f64], ys: &[f64]) -> GeometricFit {
    let (lo, hi) = RHO_RANGE;
    let steps = 751;
    let mut best: Option<GeometricFit> = None;
    for i in 0..steps {
        let rho = lo + (hi - lo) * i as f64 / (steps - 1) as f64;
        let basis: Vec<f64> = xs.iter().map(|&x| rho.powf(x)).collect();
        let fit = linear_fit(&basis, ys);
        let cand = GeometricFit {
            limit: fit.intercept,
            scale: -fit.slope,
            rho,
            sse: fit.sse,
        };
        if best.is_none_or(|b| cand.sse < b.sse) {
            best = Some(cand);
        }
    }
    best.expect("non-empty scan")
}

/// Outcome of comparing an unbounded model against a convergent one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Growth {
    Unbounded,
    Bounded,
    Inconclusive,
}

/// Compares residuals of an unbounded fit and a bounded fit on the same
/// data under the ratio rule.
pub fn compare(sse_unbounded: f64, sse_bounded: f64, ys: &[f64]) -> Growth {
    let scale: f64 = ys.iter().map(|y| y * y).sum::<f64>().max(f64::MIN_POSITIVE);
    let floor = 1e-12 * scale;
    let (u, b) = (sse_unbounded.max(floor), sse_bounded.max(floor));
    if u * RESIDUAL_RATIO <= b {
        Growth::Unbounded
    } else if b * RESIDUAL_RATIO <= u {
        Growth::Bounded
    } else {
        Growth::Inconclusive
    }
}

/// Linear growth in `x` against a convergent geometric tail.
pub fn linear_vs_geometric(xs: &[f64], ys: &[f64]) -> Growth {
    if xs.len() < MIN_POINTS {
        return Growth::Inconclusive;
    }
    compare(linear_fit(xs, ys).sse, geometric_fit(xs, ys).sse, ys)
}

/// Growth like `ln x` against a convergent geometric tail in `x`.
pub fn log_vs_geometric(xs: &[f64], ys: &[f64]) -> Growth {
    if xs.len() < MIN_POINTS {
        return Growth::Inconclusive;
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    compare(linear_fit(&lx, ys).sse, geometric_fit(xs, ys).sse, ys)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys = [3.0, 5.0, 7.0, 9.0];
        let f = linear_fit(&xs, &ys);
        assert!((f.slope - 2.0).abs() < 1e-12 && (f.intercept - 1.0).abs() < 1e-12);
        assert!(f.sse < 1e-20 && (f.r_squared - 1.0).abs() < 1e-12);
        assert_eq!(linear_vs_geometric(&xs, &ys), Growth::Unbounded);
    }

    #[test]
    fn exact_geometric_tail() {
        let xs: Vec<f64> = (1..=8).map(f64::from).collect();
        let ys: Vec<f64> = xs.iter().map(|&k| 2.0 - 0.7 * 0.5f64.powf(k)).collect();
        let g = geometric_fit(&xs, &ys);
        assert!((g.rho - 0.5).abs() < 1e-3);
        assert!((g.limit - 2.0).abs() < 1e-4);
        assert_eq!(linear_vs_geometric(&xs, &ys), Growth::Bounded);
        assert_eq!(log_vs_geometric(&xs, &ys), Growth::Bounded);
    }

    #[test]
    fn logarithmic_growth() {
        let xs: Vec<f64> = (2..=12).map(|k| f64::from(1 << k)).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 0.3 + 0.16 * x.ln()).collect();
        assert_eq!(log_vs_geometric(&xs, &ys), Growth::Unbounded);
    }

    #[test]
    fn too_few_points() {
        assert_eq!(linear_vs_geometric(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]), Growth::Inconclusive);
    }
}
