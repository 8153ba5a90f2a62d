//! Second-order finite differences for −ħ²/2m ψ'' + Vψ = Eψ with hard walls.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::tridiag::SymTridiagonal;
use crate::potentials::{PotentialModel, SemiclassicalContext};

pub const MIN_GRID_POINTS: usize = 64;
/// Oscillator lengths of padding required beyond the outer turning points.
pub const MIN_PADDING: f64 = 3.0;
/// Relative wall amplitude above which the ground state is considered
/// contaminated by the boundary.
pub const BOUNDARY_LIMIT: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleSpectrum {
    pub eigenvalues: Vec<f64>,
    pub grid_points: usize,
    pub grid_spacing: f64,
    pub domain: (f64, f64),
    /// |E(h) − E(h/2)| for each eigenvalue.
    pub convergence_estimate: Vec<f64>,
    /// Largest wall-adjacent ground-state amplitude relative to its peak.
    pub boundary_amplitude: f64,
}

impl OracleSpectrum {
    pub fn boundary_contaminated(&self) -> bool {
        self.boundary_amplitude > BOUNDARY_LIMIT
    }
}

/// Interior-point Hamiltonian on `grid_points` nodes strictly inside
/// `domain`, spacing h = (b − a)/(grid_points + 1).
pub fn fd_hamiltonian<F: Fn(f64) -> f64>(
    potential: F,
    hbar: f64,
    mass: f64,
    domain: (f64, f64),
    grid_points: usize,
) -> Result<(SymTridiagonal, f64)> {
    let (a, b) = domain;
    if !(b > a) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidParameter(format!("invalid domain [{a}, {b}]")));
    }
    if grid_points == 0 {
        return Err(Error::InvalidParameter("grid must have at least one point".into()));
    }
    let h = (b - a) / (grid_points + 1) as f64;
    let kinetic = hbar * hbar / (mass * h * h);
    let diag = (1..=grid_points).map(|i| kinetic + potential(a + i as f64 * h)).collect();
    let off = vec![-0.5 * kinetic; grid_points - 1];
    Ok((SymTridiagonal::new(diag, off)?, h))
}

/// The lowest `count` eigenvalues for an arbitrary potential function.
pub fn fd_eigenvalues_fn<F: Fn(f64) -> f64>(
    potential: F,
    hbar: f64,
    mass: f64,
    domain: (f64, f64),
    grid_points: usize,
    count: usize,
) -> Result<Vec<f64>> {
    if count > grid_points {
        return Err(Error::InvalidParameter(format!("{count} eigenvalues requested from {grid_points} points")));
    }
    let (t, _) = fd_hamiltonian(potential, hbar, mass, domain, grid_points)?;
    t.lowest_eigenvalues(count, 0.0)
}

/// Padded domain (x₁ − a, x_N + a).
pub fn default_domain(model: &PotentialModel) -> (f64, f64) {
    let minima = model.minima();
    let a = model.period();
    (minima[0] - a, minima[minima.len() - 1] + a)
}

/// Finite-difference reference spectrum of a potential model, with a
/// half-spacing repeat to estimate discretisation error.
pub fn fd_schrodinger_eigs(
    model: &PotentialModel,
    ctx: &SemiclassicalContext,
    domain: (f64, f64),
    grid_points: usize,
    count: usize,
) -> Result<OracleSpectrum> {
    if grid_points < MIN_GRID_POINTS {
        return Err(Error::InvalidParameter(format!(
            "grid must have at least {MIN_GRID_POINTS} points, got {grid_points}"
        )));
    }
    if count == 0 || count > grid_points / 4 {
        return Err(Error::InvalidParameter(format!(
            "eigenvalue count must be in 1..={}, got {count}",
            grid_points / 4
        )));
    }
    let minima = model.minima();
    let need_lo = minima[0] - (1.0 + MIN_PADDING) * ctx.l;
    let need_hi = minima[minima.len() - 1] + (1.0 + MIN_PADDING) * ctx.l;
    if domain.0 > need_lo || domain.1 < need_hi {
        return Err(Error::InvalidParameter(format!(
            "domain [{}, {}] must extend to [{need_lo}, {need_hi}]",
            domain.0, domain.1
        )));
    }
    let (lo, hi) = model.domain();
    if domain.0 < lo || domain.1 > hi {
        return Err(Error::OutOfDomain { x: if domain.0 < lo { domain.0 } else { domain.1 }, lo, hi });
    }

    let potential = |x: f64| model.evaluate(x).unwrap_or(f64::NAN);
    let (t, h) = fd_hamiltonian(potential, ctx.hbar, ctx.mass, domain, grid_points)?;
    let eigenvalues = t.lowest_eigenvalues(count, 0.0)?;
    let ground = t.eigenvector(eigenvalues[0]);
    let peak = ground.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let wall = ground[0].abs().max(ground[grid_points - 1].abs());
    let boundary_amplitude = if peak > 0.0 { wall / peak } else { 0.0 };

    let finer = fd_eigenvalues_fn(potential, ctx.hbar, ctx.mass, domain, 2 * grid_points + 1, count)?;
    let convergence_estimate = eigenvalues.iter().zip(&finer).map(|(c, f)| (c - f).abs()).collect();

    Ok(OracleSpectrum { eigenvalues, grid_points, grid_spacing: h, domain, convergence_estimate, boundary_amplitude })
}

/// Least-squares fit of a band of levels to E(s) = c + Δ·(−1)ⁿ⁺¹ cos(sπ/(N+1)).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BandFit {
    pub offset: f64,
    pub delta: f64,
    /// Pearson correlation between the levels and the cosine pattern.
    pub correlation: f64,
    /// Levels in mode order s = 1..N.
    pub levels: Vec<f64>,
    /// Level minus fitted value, in mode order.
    pub residuals: Vec<f64>,
}

/// Fits N ascending levels of band `n`. For even `n` the lowest level is
/// mode s = 1; for odd `n` it is s = N.
pub fn fit_band_pattern(ascending: &[f64], n: u32) -> Result<BandFit> {
    let wells = ascending.len();
    if wells < 2 {
        return Err(Error::InvalidParameter("a band fit needs at least two levels".into()));
    }
    let mut levels = ascending.to_vec();
    if n % 2 == 1 {
        levels.reverse();
    }
    let sign = if n.is_multiple_of(2) { -1.0 } else { 1.0 };
    let denom = (wells + 1) as f64;
    let pattern: Vec<f64> =
        (1..=wells).map(|s| sign * (s as f64 * std::f64::consts::PI / denom).cos()).collect();
    let count = wells as f64;
    let mean_e = levels.iter().sum::<f64>() / count;
    let mean_p = pattern.iter().sum::<f64>() / count;
    let (mut spp, mut see, mut sep) = (0.0, 0.0, 0.0);
    for (e, p) in levels.iter().zip(&pattern) {
        let (de, dp) = (e - mean_e, p - mean_p);
        spp += dp * dp;
        see += de * de;
        sep += de * dp;
    }
    let delta = sep / spp;
    let offset = mean_e - delta * mean_p;
    let correlation = if see > 0.0 { sep / (see * spp).sqrt() } else { 0.0 };
    let residuals = levels.iter().zip(&pattern).map(|(e, p)| e - (offset + delta * p)).collect();
    Ok(BandFit { offset, delta, correlation, levels, residuals })
}
