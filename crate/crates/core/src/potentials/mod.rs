//! Finite periodic N-well potentials with quadratic minima.
//!
//! Three families are supported:
//!
//! - **cosine**: V(x) = 2q cos(2x/l_c) with minima at odd multiples of
//!   π l_c / 2, period a = π l_c and V₀ = −2q;
//! - **parabolic chain**: V(x) = V₀ + ½ k d(x)², d the distance to the
//!   nearest well centre, with a cusped barrier top halfway between wells;
//! - **tabulated**: sampled (x, V) pairs with linear or cubic interpolation.
//!
//! The built-in families are periodic on the window
//! `[x₁ − a/2, x₁ + (N − ½)a]`, which spans N full cells from barrier top to
//! barrier top. Outside the window the potential stays flat at the barrier
//! height, so the outermost wells see the same barrier as the inner ones and
//! every state of the lowest bands is confined to the window.

pub mod spline;

use std::f64::consts::PI;

use serde::Serialize;

pub use spline::{Interpolation, Table};

use crate::error::{Error, Result};
use crate::oracle::roots::find_root;
use crate::semiclassics;

/// Threshold on a/l below which the barrier is too thin for the
/// semiclassical formulas.
pub const MIN_SEPARATION_RATIO: f64 = 5.0;
/// Threshold on |δₙ| = Δₙ/ħω above which the level shift is not small.
pub const MAX_LEVEL_SHIFT: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct CosinePotential {
    pub q: f64,
    pub lc: f64,
    pub wells: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParabolicChain {
    pub v0: f64,
    /// V''(minimum) = m ω².
    pub curvature: f64,
    pub a: f64,
    pub x1: f64,
    pub wells: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedPotential {
    table: Table,
    minima: Vec<f64>,
    period: f64,
}

impl TabulatedPotential {
    pub fn table(&self) -> &Table {
        &self.table
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PotentialModel {
    Cosine(CosinePotential),
    ParabolicChain(ParabolicChain),
    Tabulated(TabulatedPotential),
}

fn require_positive(name: &str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive and finite, got {value}")))
    }
}

fn require_wells(wells: usize) -> Result<()> {
    if wells == 0 {
        Err(Error::InvalidParameter("at least one well is required".into()))
    } else {
        Ok(())
    }
}

impl PotentialModel {
    pub fn cosine(q: f64, lc: f64, wells: usize) -> Result<Self> {
        require_positive("q", q)?;
        require_positive("l_c", lc)?;
        require_wells(wells)?;
        Ok(PotentialModel::Cosine(CosinePotential { q, lc, wells }))
    }

    pub fn parabolic_chain(v0: f64, curvature: f64, a: f64, x1: f64, wells: usize) -> Result<Self> {
        if !v0.is_finite() || !x1.is_finite() {
            return Err(Error::InvalidParameter("V0 and x1 must be finite".into()));
        }
        require_positive("curvature m*omega^2", curvature)?;
        require_positive("period a", a)?;
        require_wells(wells)?;
        Ok(PotentialModel::ParabolicChain(ParabolicChain { v0, curvature, a, x1, wells }))
    }

    /// Parabolic chain parametrised by ω and the particle mass.
    pub fn parabolic_chain_with_frequency(
        v0: f64,
        omega: f64,
        mass: f64,
        a: f64,
        x1: f64,
        wells: usize,
    ) -> Result<Self> {
        require_positive("omega", omega)?;
        require_positive("mass", mass)?;
        Self::parabolic_chain(v0, mass * omega * omega, a, x1, wells)
    }

    /// Wraps a sampled potential. Wells are the interior local minima of the
    /// samples, refined on the interpolant; the period is their mean spacing
    /// (or the table span when there is a single well).
    pub fn tabulated(table: Table) -> Result<Self> {
        let minima = locate_minima(&table);
        if minima.is_empty() {
            return Err(Error::InvalidWell("table has no interior minimum".into()));
        }
        let period = if minima.len() >= 2 {
            (minima[minima.len() - 1] - minima[0]) / (minima.len() - 1) as f64
        } else {
            let (lo, hi) = table.span();
            hi - lo
        };
        Ok(PotentialModel::Tabulated(TabulatedPotential { table, minima, period }))
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            PotentialModel::Cosine(_) => "cosine",
            PotentialModel::ParabolicChain(_) => "parabolic-chain",
            PotentialModel::Tabulated(_) => "tabulated",
        }
    }

    pub fn wells(&self) -> usize {
        match self {
            PotentialModel::Cosine(c) => c.wells,
            PotentialModel::ParabolicChain(p) => p.wells,
            PotentialModel::Tabulated(t) => t.minima.len(),
        }
    }

    /// Distance between adjacent minima.
    pub fn period(&self) -> f64 {
        match self {
            PotentialModel::Cosine(c) => PI * c.lc,
            PotentialModel::ParabolicChain(p) => p.a,
            PotentialModel::Tabulated(t) => t.period,
        }
    }

    /// Position of the leftmost minimum.
    pub fn first_minimum(&self) -> f64 {
        match self {
            PotentialModel::Cosine(c) => 0.5 * PI * c.lc,
            PotentialModel::ParabolicChain(p) => p.x1,
            PotentialModel::Tabulated(t) => t.minima[0],
        }
    }

    pub fn minima(&self) -> Vec<f64> {
        match self {
            PotentialModel::Tabulated(t) => t.minima.clone(),
            _ => {
                let (x1, a) = (self.first_minimum(), self.period());
                (0..self.wells()).map(|j| x1 + j as f64 * a).collect()
            }
        }
    }

    /// Barrier-top-to-barrier-top window covering all N wells.
    pub fn periodic_window(&self) -> (f64, f64) {
        match self {
            PotentialModel::Tabulated(t) => {
                let (lo, hi) = t.table.span();
                let half = 0.5 * t.period;
                let last = t.minima[t.minima.len() - 1];
                ((t.minima[0] - half).max(lo), (last + half).min(hi))
            }
            _ => {
                let (x1, a) = (self.first_minimum(), self.period());
                (x1 - 0.5 * a, x1 + (self.wells() as f64 - 0.5) * a)
            }
        }
    }

    /// Interval on which [`PotentialModel::evaluate`] is defined.
    pub fn domain(&self) -> (f64, f64) {
        match self {
            PotentialModel::Tabulated(t) => t.table.span(),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// V(x).
    pub fn evaluate(&self, x: f64) -> Result<f64> {
        let (lo, hi) = self.domain();
        if !x.is_finite() || x < lo || x > hi {
            return Err(Error::OutOfDomain { x, lo, hi });
        }
        Ok(match self {
            PotentialModel::Tabulated(t) => t.table.value(x),
            _ => {
                let (wlo, whi) = self.periodic_window();
                self.periodic_value(x.clamp(wlo, whi))
            }
        })
    }

    /// V on the periodic extension of the built-in families (no exterior
    /// flattening); tabulated models fall back to the table.
    pub(crate) fn periodic_value(&self, x: f64) -> f64 {
        match self {
            PotentialModel::Cosine(c) => 2.0 * c.q * (2.0 * x / c.lc).cos(),
            PotentialModel::ParabolicChain(p) => {
                let d = (x - p.x1) - ((x - p.x1) / p.a).round() * p.a;
                p.v0 + 0.5 * p.curvature * d * d
            }
            PotentialModel::Tabulated(t) => t.table.value(x.clamp(t.table.span().0, t.table.span().1)),
        }
    }

    /// V on the first unit cell [x₁, x₁ + a], used for barrier quantities.
    pub(crate) fn cell_value(&self, x: f64) -> Result<f64> {
        match self {
            PotentialModel::Tabulated(_) => self.evaluate(x),
            _ => Ok(self.periodic_value(x)),
        }
    }

    /// Location and height of the barrier maximum between the first two
    /// minima.
    pub fn barrier_top(&self) -> Result<(f64, f64)> {
        let (x1, a) = (self.first_minimum(), self.period());
        match self {
            PotentialModel::Cosine(c) => Ok((x1 + 0.5 * a, 2.0 * c.q)),
            PotentialModel::ParabolicChain(p) => Ok((x1 + 0.5 * a, p.v0 + 0.125 * p.curvature * a * a)),
            PotentialModel::Tabulated(t) => {
                if t.minima.len() < 2 {
                    return Err(Error::InvalidWell("barrier quantities need at least two minima".into()));
                }
                let (lo, hi) = (t.minima[0], t.minima[1]);
                let x = golden_section(|x| -t.table.value(x), lo, hi);
                Ok((x, t.table.value(x)))
            }
        }
    }

    /// (V₀, ω): the potential at the minimum and the harmonic frequency
    /// √(V''/m). Analytic for built-in families, a central second difference
    /// of the interpolant for tables.
    pub fn quadratic_params(&self, mass: f64) -> Result<(f64, f64)> {
        require_positive("mass", mass)?;
        match self {
            PotentialModel::Cosine(c) => Ok((-2.0 * c.q, (8.0 * c.q / mass).sqrt() / c.lc)),
            PotentialModel::ParabolicChain(p) => Ok((p.v0, (p.curvature / mass).sqrt())),
            PotentialModel::Tabulated(t) => {
                let x = t.minima[0];
                let h = t.table.spacing_at(x);
                let (lo, hi) = t.table.span();
                if x - h < lo || x + h > hi {
                    return Err(Error::InvalidWell(format!("minimum at {x} too close to the table edge")));
                }
                let v = t.table.value(x);
                let second = (t.table.value(x + h) - 2.0 * v + t.table.value(x - h)) / (h * h);
                if !(second > 0.0) {
                    return Err(Error::InvalidWell(format!(
                        "non-positive second derivative {second} at candidate minimum {x}"
                    )));
                }
                Ok((v, (second / mass).sqrt()))
            }
        }
    }
}

/// Interior local minima of the samples, each refined on the interpolant.
fn locate_minima(table: &Table) -> Vec<f64> {
    let (xs, vs) = (table.xs(), table.vs());
    (1..xs.len().saturating_sub(1))
        .filter(|&i| vs[i] < vs[i - 1] && vs[i] <= vs[i + 1])
        .map(|i| golden_section(|x| table.value(x), xs[i - 1], xs[i + 1]))
        .collect()
}

/// Golden-section minimisation of a unimodal function on [lo, hi].
fn golden_section<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let ratio = 0.5 * (5.0_f64.sqrt() - 1.0);
    let mut c = hi - ratio * (hi - lo);
    let mut d = lo + ratio * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (hi - lo).abs() <= 1e-13 * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - ratio * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + ratio * (hi - lo);
            fd = f(d);
        }
    }
    0.5 * (lo + hi)
}

/// Action and mass units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Units {
    pub hbar: f64,
    pub mass: f64,
}

impl Units {
    /// ħ = m = 1.
    pub fn natural() -> Self {
        Units { hbar: 1.0, mass: 1.0 }
    }

    /// ħ = 1 with the mass chosen so that ħ²/(2 m l_c²) = 1.
    pub fn unit_energy_scale(lc: f64) -> Self {
        Units { hbar: 1.0, mass: 1.0 / (2.0 * lc * lc) }
    }

    /// ħ²/(2 m l_c²).
    pub fn energy_scale(&self, lc: f64) -> f64 {
        self.hbar * self.hbar / (2.0 * self.mass * lc * lc)
    }
}

/// Physical constants and well geometry shared by every semiclassical
/// quantity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SemiclassicalContext {
    pub hbar: f64,
    pub mass: f64,
    pub omega: f64,
    /// Oscillator length √(ħ/mω).
    pub l: f64,
    pub a: f64,
    pub x1: f64,
    pub wells: usize,
    pub v0: f64,
}

impl SemiclassicalContext {
    pub fn new(model: &PotentialModel, units: Units) -> Result<Self> {
        require_positive("hbar", units.hbar)?;
        let (v0, omega) = model.quadratic_params(units.mass)?;
        Ok(SemiclassicalContext {
            hbar: units.hbar,
            mass: units.mass,
            omega,
            l: (units.hbar / (units.mass * omega)).sqrt(),
            a: model.period(),
            x1: model.first_minimum(),
            wells: model.wells(),
            v0,
        })
    }

    pub fn hbar_omega(&self) -> f64 {
        self.hbar * self.omega
    }

    /// Harmonic level V₀ + (ν + ½)ħω.
    pub fn level(&self, nu: f64) -> f64 {
        self.v0 + (nu + 0.5) * self.hbar_omega()
    }

    pub fn separation_ratio(&self) -> f64 {
        self.a / self.l
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BandShift {
    pub n: u32,
    /// Δₙ/ħω, or `None` when the level is not below the barrier.
    pub shift: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DiagnosticFlag {
    NarrowBarrier { a_over_l: f64 },
    LargeLevelShift { n: u32, shift: f64 },
    LevelAboveBarrier { n: u32 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticsReport {
    /// max |V(x + a) − V(x)| over x ∈ [x₁, x₁ + (N − 2)a].
    pub periodicity_violation: f64,
    pub a_over_l: f64,
    pub band_shifts: Vec<BandShift>,
    pub flags: Vec<DiagnosticFlag>,
}

impl DiagnosticsReport {
    pub fn is_clear(&self) -> bool {
        self.flags.is_empty()
    }
}

const PERIODICITY_PROBES: usize = 257;

/// Estimates how well the model sits in the deep-barrier regime. Never
/// fails; problems show up as flags.
pub fn validate_context(model: &PotentialModel, ctx: &SemiclassicalContext, bands: &[u32]) -> DiagnosticsReport {
    let mut violation: f64 = 0.0;
    if ctx.wells >= 2 {
        let span = (ctx.wells - 2) as f64 * ctx.a;
        for i in 0..PERIODICITY_PROBES {
            let x = ctx.x1 + span * i as f64 / (PERIODICITY_PROBES - 1) as f64;
            match (model.evaluate(x), model.evaluate(x + ctx.a)) {
                (Ok(v), Ok(w)) => violation = violation.max((w - v).abs()),
                _ => violation = f64::INFINITY,
            }
        }
    }

    let a_over_l = ctx.separation_ratio();
    let mut flags = Vec::new();
    if !(a_over_l >= MIN_SEPARATION_RATIO) {
        flags.push(DiagnosticFlag::NarrowBarrier { a_over_l });
    }
    let band_shifts = bands
        .iter()
        .map(|&n| {
            let shift = semiclassics::hopping_delta(model, ctx, n).ok().map(|d| d / ctx.hbar_omega());
            match shift {
                Some(s) if s.abs() > MAX_LEVEL_SHIFT => flags.push(DiagnosticFlag::LargeLevelShift { n, shift: s }),
                None => flags.push(DiagnosticFlag::LevelAboveBarrier { n }),
                _ => {}
            }
            BandShift { n, shift }
        })
        .collect();

    DiagnosticsReport { periodicity_violation: violation, a_over_l, band_shifts, flags }
}

/// Bracketed root of V(x) = energy on [lo, hi] for the unit-cell potential.
pub(crate) fn cell_crossing(model: &PotentialModel, energy: f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    find_root(|x| model.cell_value(x).map(|v| v - energy).unwrap_or(f64::NAN), lo, hi, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn cosine_values() {
        let m = PotentialModel::cosine(1.0, 1.0, 4).unwrap();
        assert_eq!(m.evaluate(0.0).unwrap(), 2.0);
        assert!((m.evaluate(FRAC_PI_2).unwrap() + 2.0).abs() < 1e-15);
        assert_eq!(m.minima().len(), 4);
        assert!((m.period() - PI).abs() < 1e-15);
    }

    #[test]
    fn parabolic_chain_values() {
        let m = PotentialModel::parabolic_chain(0.0, 1.0, 4.0, 0.0, 3).unwrap();
        assert_eq!(m.evaluate(1.0).unwrap(), 0.5);
        // Continuous at the cell boundary, where both parabolas meet.
        let left = m.evaluate(2.0 - 1e-12).unwrap();
        let right = m.evaluate(2.0 + 1e-12).unwrap();
        assert!((left - right).abs() < 1e-11);
        assert_eq!(m.evaluate(2.0).unwrap(), 2.0);
    }

    #[test]
    fn exterior_is_flat_at_barrier_height() {
        let m = PotentialModel::cosine(3.0, 1.0, 2).unwrap();
        let (lo, hi) = m.periodic_window();
        assert_eq!(lo, 0.0);
        assert!((hi - 2.0 * PI).abs() < 1e-14);
        assert_eq!(m.evaluate(-5.0).unwrap(), 6.0);
        assert_eq!(m.evaluate(hi + 3.0).unwrap(), m.evaluate(hi).unwrap());
    }

    #[test]
    fn out_of_domain() {
        let m = PotentialModel::cosine(1.0, 1.0, 2).unwrap();
        assert!(matches!(m.evaluate(f64::NAN), Err(Error::OutOfDomain { .. })));
        let xs: Vec<f64> = (0..41).map(|i| -2.0 + 0.1 * i as f64).collect();
        let vs = xs.iter().map(|x| 0.5 * x * x).collect();
        let t = PotentialModel::tabulated(Table::new(xs, vs, Interpolation::Cubic).unwrap()).unwrap();
        assert!(matches!(t.evaluate(2.5), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn quadratic_params_builtin() {
        let m = PotentialModel::cosine(25.0, 2.0, 3).unwrap();
        let (v0, w) = m.quadratic_params(0.5).unwrap();
        assert_eq!(v0, -50.0);
        assert!((w - (8.0_f64 * 25.0 / 0.5).sqrt() / 2.0).abs() < 1e-14);
        let p = PotentialModel::parabolic_chain_with_frequency(1.0, 2.0, 1.0, 10.0, 0.0, 2).unwrap();
        assert!((p.quadratic_params(1.0).unwrap().1 - 2.0).abs() < 1e-15);
    }

    #[test]
    fn tabulated_harmonic_frequency() {
        let xs: Vec<f64> = (0..201).map(|i| -5.0 + 0.05 * i as f64).collect();
        let vs = xs.iter().map(|x| 0.5 * x * x).collect();
        let t = PotentialModel::tabulated(Table::new(xs, vs, Interpolation::Cubic).unwrap()).unwrap();
        let (v0, w) = t.quadratic_params(1.0).unwrap();
        assert!(v0.abs() < 1e-10);
        assert!((w - 1.0).abs() < 1e-6, "{w}");
        assert_eq!(t.wells(), 1);
    }

    #[test]
    fn tabulated_detects_all_minima() {
        let xs: Vec<f64> = (0..=600).map(|i| 0.01 * i as f64 * PI).collect();
        let vs = xs.iter().map(|x| 2.0 * (2.0 * x).cos()).collect();
        let t = PotentialModel::tabulated(Table::new(xs, vs, Interpolation::Cubic).unwrap()).unwrap();
        assert_eq!(t.wells(), 6);
        assert!((t.first_minimum() - FRAC_PI_2).abs() < 1e-6);
        assert!((t.period() - PI).abs() < 1e-6);
        let (top, height) = t.barrier_top().unwrap();
        assert!((top - PI).abs() < 1e-5 && (height - 2.0).abs() < 1e-8);
    }

    #[test]
    fn table_without_minimum() {
        let xs: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let vs = xs.clone();
        let err = PotentialModel::tabulated(Table::new(xs, vs, Interpolation::Linear).unwrap()).unwrap_err();
        assert!(matches!(err, Error::InvalidWell(_)));
    }

    #[test]
    fn constructor_validation() {
        assert!(PotentialModel::cosine(-1.0, 1.0, 2).is_err());
        assert!(PotentialModel::cosine(1.0, 1.0, 0).is_err());
        assert!(PotentialModel::parabolic_chain(0.0, 0.0, 1.0, 0.0, 2).is_err());
    }

    #[test]
    fn context_geometry() {
        let m = PotentialModel::cosine(25.0, 1.0, 6).unwrap();
        let ctx = SemiclassicalContext::new(&m, Units::natural()).unwrap();
        let expected_l = 1.0 / 200.0_f64.powf(0.25);
        assert!((ctx.l - expected_l).abs() < 1e-14);
        assert!((ctx.separation_ratio() - PI * 200.0_f64.powf(0.25)).abs() < 1e-12);
        assert!((ctx.l - (ctx.hbar / (ctx.mass * ctx.omega)).sqrt()).abs() == 0.0);
    }

    #[test]
    fn diagnostics_cosine_clear() {
        let m = PotentialModel::cosine(25.0, 1.0, 6).unwrap();
        let ctx = SemiclassicalContext::new(&m, Units::natural()).unwrap();
        let report = validate_context(&m, &ctx, &[0, 1]);
        assert!((report.a_over_l - 11.8).abs() < 0.05);
        assert!(report.periodicity_violation < 1e-12 * 50.0);
        assert!(report.is_clear(), "{report:?}");
    }

    #[test]
    fn diagnostics_flag_narrow_barrier() {
        let m = PotentialModel::parabolic_chain(0.0, 1.0, 2.0, 0.0, 4).unwrap();
        let ctx = SemiclassicalContext::new(&m, Units::natural()).unwrap();
        let report = validate_context(&m, &ctx, &[0]);
        assert!(report.flags.iter().any(|f| matches!(f, DiagnosticFlag::NarrowBarrier { .. })));
        assert!(!report.is_clear());
    }

    #[test]
    fn units() {
        let u = Units::unit_energy_scale(2.0);
        assert!((u.energy_scale(2.0) - 1.0).abs() < 1e-15);
        assert_eq!(Units::natural().energy_scale(1.0), 0.5);
    }
}
