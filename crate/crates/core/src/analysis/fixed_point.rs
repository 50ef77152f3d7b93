use crate::error::{Error, Result};

/// Number of intervals in the preliminary sign scan.
pub const SCAN_INTERVALS: usize = 1024;

/// Finds `a ∈ [lo, hi]` with `|f(a) − a| ≤ tol`.
///
/// Scans `g(a) = f(a) − a` on a uniform partition, returns the first scan
/// point already within `tol`, and otherwise bisects each sign-changing
/// interval in order. An interval whose bisection collapses without meeting
/// the tolerance holds a jump of `f` across the diagonal, so the scan moves
/// on to the next one.
pub fn fixed_point_solve<F>(f: F, lo: f64, hi: f64, tol: f64, max_iter: usize) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if tol.is_nan() || tol <= 0.0 || !lo.is_finite() || !hi.is_finite() || lo > hi {
        return Err(Error::InvalidParameter(format!(
            "fixed_point_solve needs finite lo <= hi and tol > 0 (got [{lo}, {hi}], tol {tol})"
        )));
    }
    let g = |a: f64| f(a) - a;
    let h = (hi - lo) / SCAN_INTERVALS as f64;
    let points: Vec<f64> = (0..=SCAN_INTERVALS)
        .map(|j| if j == SCAN_INTERVALS { hi } else { lo + j as f64 * h })
        .collect();
    let values: Vec<f64> = points.iter().map(|&a| g(a)).collect();

    if let Some(j) = values.iter().position(|v| v.abs() <= tol) {
        return Ok(points[j]);
    }

    for j in 0..SCAN_INTERVALS {
        let (mut left, mut right) = (points[j], points[j + 1]);
        let (mut g_left, g_right) = (values[j], values[j + 1]);
        if g_left.is_nan() || g_right.is_nan() || g_left.signum() == g_right.signum() {
            continue;
        }
        for _ in 0..max_iter {
            let mid = 0.5 * (left + right);
            if mid <= left || mid >= right {
                break;
            }
            let g_mid = g(mid);
            if g_mid.abs() <= tol {
                return Ok(mid);
            }
            if g_mid.signum() == g_left.signum() {
                left = mid;
                g_left = g_mid;
            } else {
                right = mid;
            }
        }
    }
    Err(Error::NoFixedPoint { lo, hi })
}
