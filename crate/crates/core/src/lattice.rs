//! Tight-binding Hamiltonians on N sites: the open chain (tridiagonal
//! Toeplitz) and the closed ring (symmetric circulant).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::tridiag::SymTridiagonal;
use crate::semiclassics::BandResult;

/// Relative tolerance for calling two levels degenerate.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// E₀ I + t T with T the nearest-neighbour adjacency matrix of an open chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChainHamiltonian {
    pub onsite: f64,
    pub hopping: f64,
    pub wells: usize,
}

impl ChainHamiltonian {
    pub fn new(onsite: f64, hopping: f64, wells: usize) -> Result<Self> {
        if wells == 0 {
            return Err(Error::InvalidParameter("chain needs at least one site".into()));
        }
        if !onsite.is_finite() || !hopping.is_finite() {
            return Err(Error::InvalidParameter("chain entries must be finite".into()));
        }
        Ok(ChainHamiltonian { onsite, hopping, wells })
    }

    /// The chain whose spectrum reproduces a semiclassical band:
    /// t = (−1)ⁿ⁺¹ Δₙ / 2.
    pub fn from_band(band: &BandResult) -> Result<Self> {
        let sign = if band.n.is_multiple_of(2) { -1.0 } else { 1.0 };
        Self::new(band.e_n0, sign * 0.5 * band.delta_n, band.wells())
    }

    pub fn tridiagonal(&self) -> SymTridiagonal {
        SymTridiagonal::toeplitz(self.wells, self.onsite, self.hopping).expect("validated chain")
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.wells;
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| match i.abs_diff(j) {
                        0 => self.onsite,
                        1 => self.hopping,
                        _ => 0.0,
                    })
                    .collect()
            })
            .collect()
    }

    /// Eigenvalues in ascending order, by bisection.
    pub fn spectrum(&self) -> Vec<f64> {
        self.tridiagonal().eigenvalues(0.0).expect("validated chain")
    }

    /// Eigenvalues ordered by the mode index s = 1..N, where mode s has
    /// energy E₀ + 2t cos(sπ/(N+1)).
    pub fn spectrum_by_mode(&self) -> Vec<f64> {
        let mut ev = self.spectrum();
        if self.hopping > 0.0 {
            ev.reverse();
        }
        ev
    }
}

/// 2 cos(sπ/(N+1)) for s = 1..N.
pub fn toeplitz_spectrum(wells: usize) -> Vec<f64> {
    let denom = (wells + 1) as f64;
    (1..=wells).map(|s| 2.0 * (s as f64 * PI / denom).cos()).collect()
}

fn check_mode(wells: usize, s: usize) -> Result<()> {
    if s == 0 || s > wells {
        Err(Error::InvalidParameter(format!("mode index s = {s} outside 1..={wells}")))
    } else {
        Ok(())
    }
}

/// Normalised eigenvector √(2/(N+1)) sin((j+1)sπ/(N+1)), j = 0..N−1.
pub fn eigenstate_coefficients(wells: usize, s: usize) -> Result<Vec<f64>> {
    check_mode(wells, s)?;
    let denom = (wells + 1) as f64;
    let norm = (2.0 / denom).sqrt();
    Ok((0..wells).map(|j| norm * ((j + 1) as f64 * s as f64 * PI / denom).sin()).collect())
}

/// max_j |(−1)ʲ c_j(N+1−s) − c_j(s)|. Mode N+1−s is mode s with alternating
/// signs, so this vanishes up to rounding.
pub fn intraband_symmetry_check(wells: usize, s: usize) -> Result<f64> {
    let c = eigenstate_coefficients(wells, s)?;
    let mirror = eigenstate_coefficients(wells, wells + 1 - s)?;
    Ok(c.iter()
        .zip(&mirror)
        .enumerate()
        .map(|(j, (a, b))| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            (sign * b - a).abs()
        })
        .fold(0.0, f64::max))
}

/// Symmetric circulant Hamiltonian H_{jk} = h_{(k−j) mod N}.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RingHamiltonian {
    h: Vec<f64>,
}

impl RingHamiltonian {
    /// `h[m]` couples sites m apart; requires h_m = h_{N−m}.
    pub fn new(h: Vec<f64>) -> Result<Self> {
        if h.is_empty() {
            return Err(Error::InvalidParameter("ring needs at least one site".into()));
        }
        if h.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("ring entries must be finite".into()));
        }
        let n = h.len();
        let scale = h.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
        for m in 1..n {
            if (h[m] - h[n - m]).abs() > DEGENERACY_TOL * scale {
                return Err(Error::InvalidParameter(format!(
                    "circulant is not symmetric: h[{m}] = {} but h[{}] = {}",
                    h[m],
                    n - m,
                    h[n - m]
                )));
            }
        }
        Ok(RingHamiltonian { h })
    }

    /// Onsite `onsite`, hopping `t` to both neighbours. For N = 2 the two
    /// bonds coincide and the single off-diagonal entry is t.
    pub fn nearest_neighbor(onsite: f64, t: f64, wells: usize) -> Result<Self> {
        let mut h = vec![0.0; wells];
        if wells == 0 {
            return Self::new(h);
        }
        h[0] = onsite;
        if wells >= 2 {
            h[1] = t;
            h[wells - 1] = t;
        }
        Self::new(h)
    }

    pub fn wells(&self) -> usize {
        self.h.len()
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.h
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.wells();
        (0..n).map(|j| (0..n).map(|k| self.h[(k + n - j) % n]).collect()).collect()
    }

    /// E(s̃) = Σₘ hₘ cos(2πm s̃/N), evaluated on the reduced remainder
    /// min(r, N − r) so that E(s̃) and E(−s̃) are bitwise equal.
    pub fn energy(&self, label: i64) -> f64 {
        let n = self.wells() as i64;
        self.h
            .iter()
            .enumerate()
            .map(|(m, hm)| {
                let r = (m as i64 * label).rem_euclid(n);
                let r = r.min(n - r);
                hm * (2.0 * PI * r as f64 / n as f64).cos()
            })
            .sum()
    }

    /// Transfer-phase-shifted plane wave e^{2πi j s̃/N}/√N.
    pub fn eigenvector(&self, label: i64) -> Vec<Complex64> {
        let n = self.wells() as i64;
        let norm = 1.0 / (n as f64).sqrt();
        (0..n).map(|j| phase(j * label, n) * norm).collect()
    }
}

/// e^{2πi r/N} with r reduced modulo N first.
fn phase(r: i64, n: i64) -> Complex64 {
    let r = r.rem_euclid(n);
    Complex64::from_polar(1.0, 2.0 * PI * r as f64 / n as f64)
}

/// Bloch labels −⌊N/2⌋ ..= ⌈N/2⌉ − 1.
pub fn ring_labels(wells: usize) -> Vec<i64> {
    let n = wells as i64;
    (-(n / 2)..n - n / 2).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RingLevel {
    pub label: i64,
    pub energy: f64,
}

pub fn circulant_spectrum(ring: &RingHamiltonian) -> Vec<RingLevel> {
    ring_labels(ring.wells()).into_iter().map(|label| RingLevel { label, energy: ring.energy(label) }).collect()
}

/// Spectrum of the nearest-neighbour ring built from a chain's onsite energy
/// and hopping.
pub fn circulant_nearest_neighbor(chain: &ChainHamiltonian) -> Result<Vec<RingLevel>> {
    Ok(circulant_spectrum(&RingHamiltonian::nearest_neighbor(chain.onsite, chain.hopping, chain.wells)?))
}

/// max over j, k of |c_{(j−k) mod N} − e^{−2πik s̃/N} c_j|, together with the
/// eigen-residual ‖Hc − Ec‖∞.
pub fn bloch_rotation_check(ring: &RingHamiltonian, label: i64) -> (f64, f64) {
    let n = ring.wells() as i64;
    let c = ring.eigenvector(label);
    let mut rotation: f64 = 0.0;
    for k in 0..n {
        let factor = phase(-k * label, n);
        for j in 0..n {
            let shifted = c[(j - k).rem_euclid(n) as usize];
            rotation = rotation.max((shifted - factor * c[j as usize]).norm());
        }
    }
    let e = ring.energy(label);
    let dense = ring.to_dense();
    let residual = dense
        .iter()
        .enumerate()
        .map(|(j, row)| {
            let hc: Complex64 = row.iter().zip(&c).map(|(h, v)| v * *h).sum();
            (hc - c[j] * e).norm()
        })
        .fold(0.0, f64::max);
    (rotation, residual)
}

/// |a − b| < 1e-12 · max(1, |a|).
pub fn degenerate(a: f64, b: f64) -> bool {
    (a - b).abs() < DEGENERACY_TOL * a.abs().max(1.0)
}

/// Number of distinct values in `energies` under [`degenerate`].
pub fn distinct_level_count(energies: &[f64]) -> usize {
    let mut sorted = energies.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut count = 0;
    let mut last: Option<f64> = None;
    for e in sorted {
        if last.is_none_or(|l| !degenerate(l, e)) {
            count += 1;
            last = Some(e);
        }
    }
    count
}

/// Indices of levels with no degenerate partner.
pub fn nondegenerate_levels(energies: &[f64]) -> Vec<usize> {
    (0..energies.len())
        .filter(|&i| !energies.iter().enumerate().any(|(j, &e)| j != i && degenerate(energies[i], e)))
        .collect()
}

/// Ring labels that share an energy with another label, paired as (s̃, s̃').
pub fn degeneracy_partners(levels: &[RingLevel]) -> Vec<(i64, i64)> {
    let mut pairs = Vec::new();
    for (i, a) in levels.iter().enumerate() {
        for b in &levels[i + 1..] {
            if degenerate(a.energy, b.energy) {
                pairs.push((a.label, b.label));
            }
        }
    }
    pairs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toeplitz_eigenpairs() {
        for n in 1..=9 {
            let t = SymTridiagonal::toeplitz(n, 0.0, 1.0).unwrap();
            let analytic = toeplitz_spectrum(n);
            for s in 1..=n {
                let v = eigenstate_coefficients(n, s).unwrap();
                let tv = t.apply(&v);
                for j in 0..n {
                    assert!((tv[j] - analytic[s - 1] * v[j]).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn mode_validation() {
        assert!(eigenstate_coefficients(4, 0).is_err());
        assert!(eigenstate_coefficients(4, 5).is_err());
    }

    #[test]
    fn chain_from_band_matches_formula() {
        for n in 0..3 {
            let band = BandResult::from_delta(n, 2.5, 1e-3, 1.0, 7).unwrap();
            let chain = ChainHamiltonian::from_band(&band).unwrap();
            for (num, exact) in chain.spectrum_by_mode().iter().zip(&band.energies) {
                assert!((num - exact).abs() < 1e-14, "n = {n}");
            }
        }
    }

    #[test]
    fn intraband_mirror() {
        for n in 1..12 {
            for s in 1..=n {
                assert!(intraband_symmetry_check(n, s).unwrap() < 1e-14);
            }
        }
    }

    #[test]
    fn ring_symmetry_enforced() {
        assert!(RingHamiltonian::new(vec![0.0, 1.0, 0.5]).is_err());
        assert!(RingHamiltonian::new(vec![0.0, 1.0, 0.0, 1.0]).is_ok());
    }

    #[test]
    fn ring_labels_and_pairs() {
        assert_eq!(ring_labels(4), vec![-2, -1, 0, 1]);
        assert_eq!(ring_labels(5), vec![-2, -1, 0, 1, 2]);
        let ring = RingHamiltonian::nearest_neighbor(0.0, -1.0, 6).unwrap();
        let levels = circulant_spectrum(&ring);
        let pairs = degeneracy_partners(&levels);
        assert_eq!(pairs, vec![(-2, 2), (-1, 1)]);
        assert_eq!(ring.energy(-1).to_bits(), ring.energy(1).to_bits());
    }

    #[test]
    fn bloch_rotation() {
        let ring = RingHamiltonian::new(vec![0.3, -1.0, 0.2, 0.2, -1.0]).unwrap();
        for label in ring_labels(5) {
            let (rot, res) = bloch_rotation_check(&ring, label);
            assert!(rot < 1e-14 && res < 1e-13);
        }
    }

    #[test]
    fn degeneracy_counting() {
        assert_eq!(distinct_level_count(&[1.0, 1.0 + 1e-14, 2.0]), 2);
        assert_eq!(nondegenerate_levels(&[1.0, 1.0, 3.0]), vec![2]);
    }
}
