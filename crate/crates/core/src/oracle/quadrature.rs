//! Globally adaptive Simpson quadrature.
//!
//! Panels are kept in a max-heap keyed on their Richardson error estimate and
//! the worst panel is split until the summed estimate falls below the target.
//! Panels adjacent to square-root zeros (turning points) therefore get refined
//! much deeper than the smooth interior, without any change of variables.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Maximum number of bisections applied to any single panel.
pub const MAX_DEPTH: u32 = 60;

const INITIAL_PANELS: usize = 16;
const MAX_EVALUATIONS: usize = 4_000_000;

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    // Refined pieces, kept so a split costs only two new evaluations per half.
    fl: f64,
    fr: f64,
    refined: f64,
    err: f64,
    depth: u32,
}

impl Panel {
    fn new<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, depth: u32) -> Self {
        let m = 0.5 * (a + b);
        let fl = f(0.5 * (a + m));
        let fr = f(0.5 * (m + b));
        let h = b - a;
        let whole = h / 6.0 * (fa + 4.0 * fm + fb);
        let refined = h / 12.0 * (fa + 4.0 * fl + 2.0 * fm + 4.0 * fr + fb);
        Panel {
            a,
            b,
            fa,
            fm,
            fb,
            whole,
            fl,
            fr,
            refined,
            err: (refined - whole).abs() / 15.0,
            depth,
        }
    }

    fn value(&self) -> f64 {
        self.refined + (self.refined - self.whole) / 15.0
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Integrates `f` over `[a, b]` so that the estimated error is at most
/// `tol * max(1, |result|)`.
///
/// Non-convergence (a panel hits [`MAX_DEPTH`] or the evaluation budget runs
/// out) yields [`Error::QuadratureNonConvergence`] carrying the best estimate.
pub fn adaptive_quadrature<F>(mut f: F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("quadrature tolerance must be positive, got {tol}")));
    }
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(Error::InvalidParameter(format!("invalid integration interval [{a}, {b}]")));
    }
    if a == b {
        return Ok(0.0);
    }

    let h = (b - a) / INITIAL_PANELS as f64;
    let mut heap = BinaryHeap::with_capacity(1024);
    let mut evaluations = 0usize;
    let mut f_left = f(a);
    evaluations += 1;
    for i in 0..INITIAL_PANELS {
        let pa = a + h * i as f64;
        let pb = if i + 1 == INITIAL_PANELS { b } else { a + h * (i + 1) as f64 };
        let fm = f(0.5 * (pa + pb));
        let fb = f(pb);
        let panel = Panel::new(&mut f, pa, pb, f_left, fm, fb, 0);
        evaluations += 4;
        f_left = fb;
        heap.push(panel);
    }

    let mut total: f64 = heap.iter().map(Panel::value).sum();
    let mut error: f64 = heap.iter().map(|p| p.err).sum();
    if !total.is_finite() {
        return Err(Error::Numerical("integrand is not finite on the interval".into()));
    }

    // Panels that can no longer be split.
    let mut exhausted: Vec<Panel> = Vec::new();

    while error > tol * total.abs().max(1.0) {
        let Some(worst) = heap.pop() else { break };
        if worst.depth >= MAX_DEPTH || evaluations >= MAX_EVALUATIONS {
            exhausted.push(worst);
            continue;
        }
        let m = 0.5 * (worst.a + worst.b);
        let left = Panel::new(&mut f, worst.a, m, worst.fa, worst.fl, worst.fm, worst.depth + 1);
        let right = Panel::new(&mut f, m, worst.b, worst.fm, worst.fr, worst.fb, worst.depth + 1);
        evaluations += 4;
        total += left.value() + right.value() - worst.value();
        error += left.err + right.err - worst.err;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum from scratch to shed the drift of the running updates.
    let total: f64 = heap.iter().chain(exhausted.iter()).map(Panel::value).sum();
    let error: f64 = heap.iter().chain(exhausted.iter()).map(|p| p.err).sum();
    if !total.is_finite() {
        return Err(Error::Numerical("integrand is not finite on the interval".into()));
    }
    if error > tol * total.abs().max(1.0) {
        return Err(Error::QuadratureNonConvergence { estimate: total, achieved_error: error });
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial() {
        let v = adaptive_quadrature(|x| x * x, 0.0, 1.0, 1e-13).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn square_root_endpoint() {
        let v = adaptive_quadrature(f64::sqrt, 0.0, 1.0, 1e-12).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-10, "{v}");
    }

    #[test]
    fn empty_interval_is_zero() {
        assert_eq!(adaptive_quadrature(|x| x, 2.0, 2.0, 1e-10).unwrap(), 0.0);
    }

    #[test]
    fn rejects_reversed_interval_and_bad_tolerance() {
        assert!(adaptive_quadrature(|x| x, 1.0, 0.0, 1e-10).is_err());
        assert!(adaptive_quadrature(|x| x, 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn non_integrable_singularity_reports_non_convergence() {
        let err = adaptive_quadrature(|x: f64| if x > 0.0 { 1.0 / x } else { 0.0 }, 0.0, 1.0, 1e-12).unwrap_err();
        match err {
            Error::QuadratureNonConvergence { estimate, .. } => assert!(estimate > 1.0),
            other => panic!("unexpected {other:?}"),
        }
    }
}
