//! Scalar root finding and minimization.

/// Root of an increasing function on `[lo, hi]` with `f(lo) <= 0 <= f(hi)`,
/// bisected until the bracket stops shrinking.
pub fn bisect_increasing(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Doubles `hi` until `f(hi) >= 0`. Returns `None` if that never happens
/// before overflow.
pub fn expand_upper(mut f: impl FnMut(f64) -> f64, mut hi: f64) -> Option<f64> {
    while hi.is_finite() {
        if f(hi) >= 0.0 {
            return Some(hi);
        }
        hi *= 2.0;
    }
    None
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for a minimum of a unimodal function on `[lo, hi]`.
/// Returns `(x, f(x))`.
pub fn golden_section(mut f: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (lo + hi);
    let fx = f(x);
    [(x, fx), (x1, f1), (x2, f2)].into_iter().fold((x, fx), |best, c| if c.1 < best.1 { c } else { best })
}

/// Evenly spaced grid of `points` over `[lo, hi]` followed by golden-section
/// refinement between the neighbours of the best grid point. Never returns a
/// value worse than the best grid point.
pub fn grid_then_golden(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, points: usize, tol: f64) -> (f64, f64) {
    assert!(points >= 2);
    let step = (hi - lo) / (points - 1) as f64;
    let grid: Vec<(f64, f64)> = (0..points)
        .map(|i| {
            let x = if i + 1 == points { hi } else { lo + step * i as f64 };
            (x, f(x))
        })
        .collect();
    let (best_i, &best) = grid
        .iter()
        .enumerate()
        .fold((0, &grid[0]), |acc, (i, c)| if c.1 < acc.1 .1 { (i, c) } else { acc });
    if !best.1.is_finite() {
        return best;
    }
    let a = grid[best_i.saturating_sub(1)].0;
    let b = grid[(best_i + 1).min(points - 1)].0;
    let refined = golden_section(&mut f, a, b, tol);
    if refined.1 < best.1 {
        refined
    } else {
        best
    }
}
