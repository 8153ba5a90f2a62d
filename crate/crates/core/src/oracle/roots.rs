//! Bracketed root finding.

use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 500;

/// Finds a root of `f` in `[lo, hi]` to a bracket width of `tol`.
///
/// Secant steps are taken when they land inside the bracket and shrink it
/// fast enough; otherwise the step falls back to bisection, so convergence is
/// guaranteed for any continuous `f` with a sign change.
pub fn find_root<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(Error::NoBracket { lo: a, hi: b });
    }

    // A secant step that fails to halve the bracket forces a bisection next.
    let mut force_bisect = false;
    for _ in 0..MAX_ITERATIONS {
        let width = b - a;
        if width <= tol {
            break;
        }
        let mid = 0.5 * (a + b);
        let secant = b - fb * (b - a) / (fb - fa);
        let x = if !force_bisect && secant > a && secant < b { secant } else { mid };
        if x <= a || x >= b {
            break;
        }
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        force_bisect = (b - a) > 0.5 * width;
    }
    Ok(if fa.abs() < fb.abs() { a } else { b })
}
