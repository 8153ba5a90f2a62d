//! Symmetric tridiagonal eigenvalues by Sturm-sequence bisection.

use crate::error::{Error, Result};

/// A real symmetric tridiagonal matrix stored as its diagonal and its
/// first off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::InvalidParameter("tridiagonal matrix must be non-empty".into()));
        }
        if off.len() + 1 != diag.len() {
            return Err(Error::InvalidParameter(format!(
                "off-diagonal length {} does not match dimension {}",
                off.len(),
                diag.len()
            )));
        }
        if diag.iter().chain(off.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("tridiagonal entries must be finite".into()));
        }
        Ok(SymTridiagonal { diag, off })
    }

    /// Constant-diagonal (Toeplitz) matrix.
    pub fn toeplitz(dim: usize, diagonal: f64, off_diagonal: f64) -> Result<Self> {
        Self::new(vec![diagonal; dim], vec![off_diagonal; dim.saturating_sub(1)])
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off(&self) -> &[f64] {
        &self.off
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut acc = self.diag[i] * v[i];
                if i > 0 {
                    acc += self.off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    acc += self.off[i] * v[i + 1];
                }
                acc
            })
            .collect()
    }

    /// Interval containing every eigenvalue.
    pub fn gershgorin_bounds(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// Infinity norm, max row sum of absolute values.
    pub fn norm(&self) -> f64 {
        let (lo, hi) = self.gershgorin_bounds();
        lo.abs().max(hi.abs())
    }

    fn pivot_guard(&self) -> f64 {
        f64::MIN_POSITIVE.sqrt() * self.norm().max(1.0)
    }

    /// Number of eigenvalues strictly below `lambda` (negative pivots of the
    /// LDLᵀ factorisation of `T − λI`).
    pub fn sturm_count(&self, lambda: f64) -> usize {
        self.sturm_count_guarded(lambda, self.pivot_guard())
    }

    fn sturm_count_guarded(&self, lambda: f64, guard: f64) -> usize {
        let mut count = 0;
        let mut pivot = self.diag[0] - lambda;
        if pivot < 0.0 {
            count += 1;
        }
        for i in 1..self.dim() {
            let safe = if pivot.abs() < guard { guard.copysign(pivot) } else { pivot };
            pivot = (self.diag[i] - lambda) - self.off[i - 1] * self.off[i - 1] / safe;
            if pivot < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `index`-th smallest eigenvalue (0-based).
    ///
    /// Bisection stops once the bracket is narrower than `tol` or than two
    /// ulps of the eigenvalue, whichever is larger; pass `0.0` to bisect to
    /// full working precision.
    pub fn eigenvalue(&self, index: usize, tol: f64) -> Result<f64> {
        self.check_index(index)?;
        let (lo, hi) = self.padded_bounds();
        Ok(self.bisect(index, tol, lo, hi, self.pivot_guard()).value)
    }

    /// The `count` smallest eigenvalues in ascending order.
    pub fn lowest_eigenvalues(&self, count: usize, tol: f64) -> Result<Vec<f64>> {
        if count == 0 {
            return Ok(Vec::new());
        }
        self.check_index(count - 1)?;
        let guard = self.pivot_guard();
        let (mut lo, hi) = self.padded_bounds();
        let mut next_hi = hi;
        let mut values = Vec::with_capacity(count);
        for index in 0..count {
            let b = self.bisect(index, tol, lo, next_hi.max(lo), guard);
            values.push(b.value);
            // count(b.lo) ≤ index, so b.lo bounds the next eigenvalue below.
            lo = b.lo;
            next_hi = b.next_hi;
        }
        Ok(values)
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.dim() {
            return Err(Error::InvalidParameter(format!(
                "eigenvalue index {index} out of range for dimension {}",
                self.dim()
            )));
        }
        Ok(())
    }

    fn padded_bounds(&self) -> (f64, f64) {
        let (glo, ghi) = self.gershgorin_bounds();
        let pad = f64::EPSILON * glo.abs().max(ghi.abs()).max(1.0);
        (glo - pad, ghi + pad)
    }

    fn bisect(&self, index: usize, tol: f64, mut lo: f64, mut hi: f64, guard: f64) -> Bisection {
        let (_, top) = self.padded_bounds();
        let mut next_hi = top;
        loop {
            let width = hi - lo;
            let floor = 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) + f64::MIN_POSITIVE;
            if width <= tol.max(floor) {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let c = self.sturm_count_guarded(mid, guard);
            if c > index {
                hi = mid;
                if c > index + 1 {
                    next_hi = next_hi.min(mid);
                }
            } else {
                lo = mid;
            }
        }
        Bisection { value: 0.5 * (lo + hi), lo, next_hi: next_hi.max(hi) }
    }

    /// All eigenvalues in ascending order.
    pub fn eigenvalues(&self, tol: f64) -> Result<Vec<f64>> {
        self.lowest_eigenvalues(self.dim(), tol)
    }

    /// Unit eigenvector for an (accurately known) eigenvalue, by inverse
    /// iteration. The largest-magnitude component is positive.
    pub fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.dim();
        let norm = self.norm();
        let shift = lambda + 8.0 * f64::EPSILON * norm.max(1.0);
        let tiny = f64::EPSILON * norm.max(f64::MIN_POSITIVE);
        let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.001 * (i % 7) as f64).collect();
        normalize(&mut v);
        for _ in 0..3 {
            v = self.solve_shifted(shift, tiny, &v);
            normalize(&mut v);
        }
        v
    }

    /// Solves (T − σI) x = rhs with partial pivoting.
    fn solve_shifted(&self, sigma: f64, tiny: f64, rhs: &[f64]) -> Vec<f64> {
        let n = self.dim();
        if n == 1 {
            let d = self.diag[0] - sigma;
            let d = if d == 0.0 { f64::EPSILON } else { d };
            return vec![rhs[0] / d];
        }
        // Upper factor rows hold up to three entries: (u0, u1, u2).
        let mut u0 = vec![0.0; n];
        let mut u1 = vec![0.0; n];
        let mut u2 = vec![0.0; n];
        let mut b = rhs.to_vec();

        // Current row being eliminated: (lead, next, nextnext).
        let mut lead = self.diag[0] - sigma;
        let mut next = self.off[0];
        for i in 0..n - 1 {
            let sub = self.off[i];
            let below_diag = self.diag[i + 1] - sigma;
            let below_next = if i + 2 < n { self.off[i + 1] } else { 0.0 };
            if lead.abs() >= sub.abs() {
                let pivot = if lead == 0.0 { tiny } else { lead };
                let factor = sub / pivot;
                u0[i] = pivot;
                u1[i] = next;
                u2[i] = 0.0;
                b[i + 1] -= factor * b[i];
                lead = below_diag - factor * next;
                next = below_next;
            } else {
                // Swap rows i and i+1.
                let factor = lead / sub;
                u0[i] = sub;
                u1[i] = below_diag;
                u2[i] = below_next;
                b.swap(i, i + 1);
                b[i + 1] -= factor * b[i];
                lead = next - factor * below_diag;
                next = -factor * below_next;
            }
        }
        u0[n - 1] = if lead == 0.0 { tiny } else { lead };

        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut acc = b[i];
            if i + 1 < n {
                acc -= u1[i] * x[i + 1];
            }
            if i + 2 < n {
                acc -= u2[i] * x[i + 2];
            }
            x[i] = acc / u0[i];
        }
        if x.iter().any(|v| !v.is_finite()) {
            let scale = x.iter().filter(|v| v.is_finite()).fold(0.0_f64, |m, v| m.max(v.abs()));
            for v in &mut x {
                if !v.is_finite() {
                    *v = scale.max(1.0).copysign(*v);
                }
            }
        }
        x
    }
}

struct Bisection {
    value: f64,
    /// Final lower end of the bracket.
    lo: f64,
    /// Upper bound on the following eigenvalue gathered along the way.
    next_hi: f64,
}

/// Scales to unit norm with the largest-magnitude entry positive.
fn normalize(v: &mut [f64]) {
    let peak = v.iter().copied().fold(0.0_f64, |m, x| if x.abs() > m.abs() { x } else { m });
    if peak == 0.0 {
        return;
    }
    for x in v.iter_mut() {
        *x /= peak;
    }
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in v.iter_mut() {
        *x /= norm;
    }
}
