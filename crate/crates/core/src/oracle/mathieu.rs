//! Mathieu characteristic values from truncated Fourier-basis matrices.
//!
//! The standard form y'' + (a − 2q cos 2v) y = 0 is used throughout. The
//! cosine potential 2q cos(2x/l_c) carries the opposite sign; the half-period
//! shift v → v + π/2 maps one onto the other and leaves band widths intact.

use crate::error::{Error, Result};
use crate::oracle::tridiag::SymTridiagonal;

/// Convergence target for basis doubling.
pub const CONVERGENCE_TOL: f64 = 1e-10;
/// Doublings attempted before giving up.
pub const MAX_DOUBLINGS: usize = 4;

/// Parity class of a Fourier expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FourierClass {
    /// Σ A₂ₖ cos 2kv, eigenvalues a₀, a₂, a₄, …
    EvenCos,
    /// Σ A₂ₖ₊₁ cos (2k+1)v, eigenvalues a₁, a₃, …
    OddCos,
    /// Σ B₂ₖ₊₁ sin (2k+1)v, eigenvalues b₁, b₃, …
    OddSin,
    /// Σ B₂ₖ₊₂ sin (2k+2)v, eigenvalues b₂, b₄, …
    EvenSin,
}

impl FourierClass {
    pub const ALL: [FourierClass; 4] = [Self::EvenCos, Self::OddCos, Self::OddSin, Self::EvenSin];

    /// Symmetric tridiagonal recurrence matrix with `size` harmonics. Any
    /// real `q` is accepted, including negative values.
    pub fn matrix(self, q: f64, size: usize) -> Result<SymTridiagonal> {
        if size == 0 {
            return Err(Error::InvalidParameter("Mathieu basis must be non-empty".into()));
        }
        let harmonic = |k: usize| -> f64 {
            let m = match self {
                Self::EvenCos => 2 * k,
                Self::OddCos | Self::OddSin => 2 * k + 1,
                Self::EvenSin => 2 * k + 2,
            };
            (m * m) as f64
        };
        let mut diag: Vec<f64> = (0..size).map(harmonic).collect();
        let mut off = vec![q; size - 1];
        match self {
            Self::EvenCos => {
                if let Some(first) = off.first_mut() {
                    *first = std::f64::consts::SQRT_2 * q;
                }
            }
            Self::OddCos => diag[0] += q,
            Self::OddSin => diag[0] -= q,
            Self::EvenSin => {}
        }
        SymTridiagonal::new(diag, off)
    }

    /// The lowest `count` characteristic values of this class.
    pub fn values(self, q: f64, size: usize, count: usize) -> Result<Vec<f64>> {
        if count > size {
            return Err(Error::InvalidParameter(format!(
                "requested {count} characteristic values from a basis of {size}"
            )));
        }
        self.matrix(q, size)?.lowest_eigenvalues(count, 0.0)
    }
}

/// Characteristic values a₀..a_R and b₁..b_{R+1} with the widths of the
/// stability bands [a_r, b_{r+1}].
#[derive(Debug, Clone, PartialEq)]
pub struct MathieuCharacteristics {
    pub q: f64,
    /// a_r for r = 0..=max_order.
    pub a_values: Vec<f64>,
    /// b_r for r = 1..=max_order+1 (index 0 holds b₁).
    pub b_values: Vec<f64>,
    /// Basis size at which the reported values converged.
    pub basis_size: usize,
    /// b_{r+1} − a_r for r = 0..=max_order.
    pub band_widths: Vec<f64>,
    /// Largest change in any value over the final basis doubling.
    pub last_change: f64,
}

impl MathieuCharacteristics {
    pub fn a(&self, r: usize) -> Option<f64> {
        self.a_values.get(r).copied()
    }

    pub fn b(&self, r: usize) -> Option<f64> {
        r.checked_sub(1).and_then(|i| self.b_values.get(i).copied())
    }

    pub fn max_order(&self) -> usize {
        self.a_values.len() - 1
    }
}

/// Smallest basis accepted for a given `q`.
pub fn minimum_basis(q: f64) -> usize {
    (3.0 * q.abs().sqrt() + 30.0).ceil() as usize
}

/// Computes a_r(q), b_{r+1}(q) for r ≤ `max_order`, doubling the basis until
/// every value changes by less than [`CONVERGENCE_TOL`].
pub fn mathieu_characteristics(q: f64, max_order: usize, basis_size: usize) -> Result<MathieuCharacteristics> {
    if !(q > 0.0) || !q.is_finite() {
        return Err(Error::InvalidParameter(format!("Mathieu q must be positive, got {q}")));
    }
    if basis_size < minimum_basis(q) {
        return Err(Error::InvalidParameter(format!(
            "basis size {basis_size} below the minimum {} for q = {q}",
            minimum_basis(q)
        )));
    }
    if basis_size < max_order + 2 {
        return Err(Error::InvalidParameter(format!(
            "basis size {basis_size} too small for order {max_order}"
        )));
    }

    let mut size = basis_size;
    let mut previous = raw_values(q, max_order, size)?;
    let mut last_change = f64::INFINITY;
    for _ in 0..MAX_DOUBLINGS {
        size *= 2;
        let current = raw_values(q, max_order, size)?;
        last_change = previous
            .0
            .iter()
            .zip(&current.0)
            .chain(previous.1.iter().zip(&current.1))
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        previous = current;
        if last_change < CONVERGENCE_TOL {
            let (a_values, b_values) = previous;
            check_interlacing(q, &a_values, &b_values)?;
            let band_widths = a_values.iter().zip(&b_values).map(|(a, b)| b - a).collect();
            return Ok(MathieuCharacteristics { q, a_values, b_values, basis_size: size, band_widths, last_change });
        }
    }
    Err(Error::TruncationNonConvergence { delta: last_change, basis_size: size })
}

fn raw_values(q: f64, max_order: usize, size: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let per_class = max_order / 2 + 1;
    let even_cos = FourierClass::EvenCos.values(q, size, per_class)?;
    let odd_cos = FourierClass::OddCos.values(q, size, per_class)?;
    let odd_sin = FourierClass::OddSin.values(q, size, per_class)?;
    let even_sin = FourierClass::EvenSin.values(q, size, per_class)?;
    let a = (0..=max_order)
        .map(|r| if r % 2 == 0 { even_cos[r / 2] } else { odd_cos[(r - 1) / 2] })
        .collect();
    let b = (1..=max_order + 1)
        .map(|r| if r % 2 == 1 { odd_sin[(r - 1) / 2] } else { even_sin[r / 2 - 1] })
        .collect();
    Ok((a, b))
}

/// a₀ < b₁ ≤ a₁ < b₂ ≤ a₂ < … for q > 0.
fn check_interlacing(q: f64, a: &[f64], b: &[f64]) -> Result<()> {
    let slack = 1e-9;
    for r in 0..a.len() {
        if b[r] < a[r] - slack {
            return Err(Error::Numerical(format!("interlacing violated at q = {q}: b_{} < a_{r}", r + 1)));
        }
        if r + 1 < a.len() && a[r + 1] < b[r] - slack {
            return Err(Error::Numerical(format!("interlacing violated at q = {q}: a_{} < b_{}", r + 1, r + 1)));
        }
    }
    Ok(())
}

/// Widths of the stability bands read off the sorted union of all four
/// classes: the r-th band is bounded by the (2r)-th and (2r+1)-th values.
/// This pairing does not depend on the sign of `q`.
pub fn band_widths_by_sorting(q: f64, size: usize, bands: usize) -> Result<Vec<f64>> {
    let per_class = bands + 1;
    let mut all = Vec::with_capacity(4 * per_class);
    for class in FourierClass::ALL {
        all.extend(class.values(q, size, per_class)?);
    }
    all.sort_by(f64::total_cmp);
    Ok((0..bands).map(|r| all[2 * r + 1] - all[2 * r]).collect())
}
