//! Sampled potentials: linear or natural-cubic-spline interpolation.

use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Interpolation {
    Linear,
    #[default]
    Cubic,
}

impl Interpolation {
    pub fn from_order(order: u32) -> Result<Self> {
        match order {
            1 => Ok(Interpolation::Linear),
            3 => Ok(Interpolation::Cubic),
            other => Err(Error::InvalidParameter(format!(
                "interpolation order must be 1 (linear) or 3 (cubic), got {other}"
            ))),
        }
    }

    pub fn order(self) -> u32 {
        match self {
            Interpolation::Linear => 1,
            Interpolation::Cubic => 3,
        }
    }
}

/// Samples (xᵢ, Vᵢ) with strictly increasing xᵢ and the interpolant through
/// them.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    xs: Vec<f64>,
    vs: Vec<f64>,
    interpolation: Interpolation,
    /// Second derivatives at the knots; all zero for linear interpolation.
    curvature: Vec<f64>,
}

impl Table {
    pub fn new(xs: Vec<f64>, vs: Vec<f64>, interpolation: Interpolation) -> Result<Self> {
        if xs.len() != vs.len() {
            return Err(Error::InvalidParameter(format!(
                "table has {} abscissae but {} values",
                xs.len(),
                vs.len()
            )));
        }
        let min_points = match interpolation {
            Interpolation::Linear => 2,
            Interpolation::Cubic => 4,
        };
        if xs.len() < min_points {
            return Err(Error::InvalidParameter(format!(
                "{interpolation:?} interpolation needs at least {min_points} samples, got {}",
                xs.len()
            )));
        }
        if xs.iter().chain(vs.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("table entries must be finite".into()));
        }
        if xs.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter("table abscissae must be strictly increasing".into()));
        }
        let curvature = match interpolation {
            Interpolation::Linear => vec![0.0; xs.len()],
            Interpolation::Cubic => natural_spline_curvature(&xs, &vs),
        };
        Ok(Table { xs, vs, interpolation, curvature })
    }

    /// Reads a two-column (x, V) CSV. Lines starting with `#` are comments;
    /// a non-numeric first row is treated as a header.
    pub fn from_csv_reader<R: Read>(reader: R, interpolation: Interpolation) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(reader);
        let mut xs = Vec::new();
        let mut vs = Vec::new();
        for (row, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| Error::InvalidParameter(format!("malformed CSV: {e}")))?;
            if record.len() != 2 {
                return Err(Error::InvalidParameter(format!(
                    "CSV row {} has {} columns, expected 2",
                    row + 1,
                    record.len()
                )));
            }
            let parsed = (record[0].parse::<f64>(), record[1].parse::<f64>());
            match parsed {
                (Ok(x), Ok(v)) => {
                    xs.push(x);
                    vs.push(v);
                }
                _ if row == 0 => continue,
                _ => {
                    return Err(Error::InvalidParameter(format!("CSV row {} is not numeric", row + 1)));
                }
            }
        }
        Table::new(xs, vs, interpolation)
    }

    pub fn from_csv_path(path: &Path, interpolation: Interpolation) -> std::io::Result<Result<Self>> {
        let file = std::fs::File::open(path)?;
        Ok(Table::from_csv_reader(file, interpolation))
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn vs(&self) -> &[f64] {
        &self.vs
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interpolation
    }

    pub fn span(&self) -> (f64, f64) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }

    pub fn contains(&self, x: f64) -> bool {
        let (lo, hi) = self.span();
        x >= lo && x <= hi
    }

    fn segment(&self, x: f64) -> usize {
        let n = self.xs.len();
        match self.xs.binary_search_by(|p| p.total_cmp(&x)) {
            Ok(i) => i.min(n - 2),
            Err(i) => i.saturating_sub(1).min(n - 2),
        }
    }

    /// Interpolated value; callers must check [`Table::contains`] first.
    pub fn value(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let h = x1 - x0;
        let t = (x - x0) / h;
        let linear = self.vs[i] * (1.0 - t) + self.vs[i + 1] * t;
        match self.interpolation {
            Interpolation::Linear => linear,
            Interpolation::Cubic => {
                let (m0, m1) = (self.curvature[i], self.curvature[i + 1]);
                let a = 1.0 - t;
                linear + h * h / 6.0 * ((a * a * a - a) * m0 + (t * t * t - t) * m1)
            }
        }
    }

    /// First derivative of the interpolant.
    pub fn derivative(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let h = x1 - x0;
        let slope = (self.vs[i + 1] - self.vs[i]) / h;
        match self.interpolation {
            Interpolation::Linear => slope,
            Interpolation::Cubic => {
                let t = (x - x0) / h;
                let a = 1.0 - t;
                let (m0, m1) = (self.curvature[i], self.curvature[i + 1]);
                slope + h / 6.0 * (-(3.0 * a * a - 1.0) * m0 + (3.0 * t * t - 1.0) * m1)
            }
        }
    }

    /// Local sample spacing around `x`.
    pub fn spacing_at(&self, x: f64) -> f64 {
        let i = self.segment(x);
        self.xs[i + 1] - self.xs[i]
    }
}

/// Solves the natural-spline system for the knot second derivatives.
fn natural_spline_curvature(xs: &[f64], vs: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut m = vec![0.0; n];
    if n < 3 {
        return m;
    }
    // Thomas algorithm on the interior knots.
    let inner = n - 2;
    let mut diag = vec![0.0; inner];
    let mut upper = vec![0.0; inner];
    let mut rhs = vec![0.0; inner];
    for k in 0..inner {
        let i = k + 1;
        let h0 = xs[i] - xs[i - 1];
        let h1 = xs[i + 1] - xs[i];
        diag[k] = 2.0 * (h0 + h1);
        upper[k] = h1;
        rhs[k] = 6.0 * ((vs[i + 1] - vs[i]) / h1 - (vs[i] - vs[i - 1]) / h0);
    }
    for k in 1..inner {
        let lower = xs[k + 1] - xs[k];
        let w = lower / diag[k - 1];
        diag[k] -= w * upper[k - 1];
        rhs[k] -= w * rhs[k - 1];
    }
    m[inner] = rhs[inner - 1] / diag[inner - 1];
    for k in (0..inner - 1).rev() {
        m[k + 1] = (rhs[k] - upper[k] * m[k + 2]) / diag[k];
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, lo: f64, hi: f64) -> Vec<f64> {
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn reproduces_knots() {
        let xs = grid(11, -1.0, 2.0);
        let vs: Vec<f64> = xs.iter().map(|x| x.sin()).collect();
        for interp in [Interpolation::Linear, Interpolation::Cubic] {
            let t = Table::new(xs.clone(), vs.clone(), interp).unwrap();
            for (x, v) in xs.iter().zip(&vs) {
                assert!((t.value(*x) - v).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn cubic_spline_accuracy_on_smooth_data() {
        let xs = grid(201, 0.0, 4.0);
        let vs: Vec<f64> = xs.iter().map(|x| x.cos()).collect();
        let t = Table::new(xs, vs, Interpolation::Cubic).unwrap();
        for i in 0..50 {
            let x = 0.5 + i as f64 * 0.06;
            assert!((t.value(x) - x.cos()).abs() < 1e-7);
            assert!((t.derivative(x) + x.sin()).abs() < 1e-5);
        }
    }

    #[test]
    fn rejects_non_increasing_abscissae() {
        let err = Table::new(vec![0.0, 1.0, 1.0, 2.0], vec![0.0; 4], Interpolation::Cubic).unwrap_err();
        assert!(err.to_string().contains("strictly increasing"));
    }

    #[test]
    fn csv_with_header_and_comments() {
        let text = "# potential samples\nx,V\n0,1\n1,0\n2,1\n3,4\n";
        let t = Table::from_csv_reader(text.as_bytes(), Interpolation::Linear).unwrap();
        assert_eq!(t.xs(), &[0.0, 1.0, 2.0, 3.0]);
        assert!((t.value(0.5) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn csv_rejects_wrong_column_count() {
        let text = "0,1,2\n1,2,3\n";
        assert!(Table::from_csv_reader(text.as_bytes(), Interpolation::Linear).is_err());
    }

    #[test]
    fn order_parsing() {
        assert_eq!(Interpolation::from_order(1).unwrap(), Interpolation::Linear);
        assert_eq!(Interpolation::from_order(3).unwrap().order(), 3);
        assert!(Interpolation::from_order(2).is_err());
    }
}
