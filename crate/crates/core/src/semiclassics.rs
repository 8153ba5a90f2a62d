//! Closed-form low-lying bands of the finite N-well potential.
//!
//! Each harmonic level Eₙ⁽⁰⁾ = V₀ + (n + ½)ħω splits into N levels
//!
//! ```text
//! Eₙ(s) = Eₙ⁽⁰⁾ + (−1)ⁿ⁺¹ Δₙ cos(sπ/(N+1)),   s = 1..N
//! Δₙ    = gₙ (ħω/π) exp(−∫ p(y)/ħ dy)
//! ```
//!
//! where the integral runs across the first barrier between the turning
//! points of Eₙ⁽⁰⁾ and p = √(2m(V − E)). Δₙ is obtained twice: directly from
//! the barrier action, and from the local-state normalisations N_L, N_R as
//! (−1)ⁿ 2ħ² N_L N_R / m. The two routes agree identically because
//! ħ/(m l²) = ω.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::elliptic::{elliptic_e, elliptic_k};
use crate::oracle::quadrature::adaptive_quadrature;
use crate::potentials::{cell_crossing, PotentialModel, SemiclassicalContext};

/// Relative/absolute tolerance for barrier-action quadrature.
pub const ACTION_TOL: f64 = 1e-10;
/// Turning-point bracket width.
pub const TURNING_POINT_TOL: f64 = 1e-12;

const SCAN_STEPS: usize = 64;

/// (−1)ⁿ
fn parity(n: u32) -> f64 {
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// ln n!
pub fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

fn ln_g_factor(n: u32) -> f64 {
    let nu = n as f64 + 0.5;
    0.5 * (2.0 * PI).ln() - ln_factorial(n) + nu * nu.ln() - nu
}

/// gₙ = √(2π)/n! · (n+½)^(n+½) · e^(−n−½).
///
/// Evaluated in log space, so large `n` neither overflows nor loses
/// precision; gₙ decreases to 1 as n grows.
pub fn g_factor(n: u32) -> f64 {
    ln_g_factor(n).exp()
}

/// Turning points bounding the first barrier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TurningPoints {
    /// Right-hand turning point of the first well.
    pub left: f64,
    /// Left-hand turning point of the second well.
    pub right: f64,
    pub barrier_top: f64,
    pub barrier_height: f64,
}

/// Scans from `from` towards `to` and returns the first crossing of
/// V(x) = energy.
fn first_crossing(model: &PotentialModel, energy: f64, from: f64, to: f64) -> Result<f64> {
    let mut prev_x = from;
    let mut prev_sign = (model.cell_value(from)? - energy).signum();
    for i in 1..=SCAN_STEPS {
        let x = from + (to - from) * i as f64 / SCAN_STEPS as f64;
        let sign = (model.cell_value(x)? - energy).signum();
        if sign != prev_sign {
            return cell_crossing(model, energy, prev_x, x, TURNING_POINT_TOL);
        }
        prev_x = x;
        prev_sign = sign;
    }
    Err(Error::NoBracket { lo: from.min(to), hi: from.max(to) })
}

/// Solves V(x) = Eₙ⁽⁰⁾ on both sides of the first barrier.
pub fn turning_points(model: &PotentialModel, ctx: &SemiclassicalContext, n: u32) -> Result<TurningPoints> {
    let energy = ctx.level(n as f64);
    let (top, height) = model.barrier_top()?;
    if !(energy < height) {
        return Err(Error::LevelAboveBarrier { energy, barrier: height });
    }
    let above = |e: Error| match e {
        Error::NoBracket { .. } => Error::LevelAboveBarrier { energy, barrier: height },
        other => other,
    };
    let left = first_crossing(model, energy, ctx.x1, top).map_err(above)?;
    let right = first_crossing(model, energy, ctx.x1 + ctx.a, top).map_err(above)?;
    Ok(TurningPoints { left, right, barrier_top: top, barrier_height: height })
}

/// Barrier action split at the cell midpoint x₁ + a/2 together with the
/// matching factors built from it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HoppingFactors {
    pub n: u32,
    /// √(n! gₙ/√π) · exp(−action_left)
    pub eps_l: f64,
    /// √(n! gₙ/√π) · exp(−action_right)
    pub eps_r: f64,
    /// (−1)ⁿ √(gₙ/2π)/l · exp(−action_right)
    pub norm_l: f64,
    /// √(gₙ/2π)/l · exp(−action_left)
    pub norm_r: f64,
    pub action_left: f64,
    pub action_right: f64,
    pub action_total: f64,
    pub turning_points: TurningPoints,
}

impl HoppingFactors {
    /// Δₙ = gₙ (ħω/π) e^(−action).
    pub fn delta(&self, ctx: &SemiclassicalContext) -> f64 {
        (ln_g_factor(self.n) - self.action_total).exp() * ctx.hbar_omega() / PI
    }

    /// Δₙ = ħω ε_L ε_R / (√π n!).
    pub fn delta_from_eps(&self, ctx: &SemiclassicalContext) -> f64 {
        ctx.hbar_omega() * self.eps_l * self.eps_r / (PI.sqrt() * ln_factorial(self.n).exp())
    }

    /// Δₙ = (−1)ⁿ 2ħ² N_L N_R / m.
    pub fn delta_from_overlap(&self, ctx: &SemiclassicalContext) -> f64 {
        parity(self.n) * 2.0 * ctx.hbar * ctx.hbar * self.norm_l * self.norm_r / ctx.mass
    }
}

/// ∫ p(y)/ħ dy over the first barrier, by adaptive quadrature on each half.
pub fn barrier_action(model: &PotentialModel, ctx: &SemiclassicalContext, n: u32) -> Result<HoppingFactors> {
    let tp = turning_points(model, ctx, n)?;
    let energy = ctx.level(n as f64);
    let mid = ctx.x1 + 0.5 * ctx.a;
    if !(tp.left < mid && mid < tp.right) {
        return Err(Error::Regime(format!(
            "cell midpoint {mid} is not inside the forbidden region [{}, {}]",
            tp.left, tp.right
        )));
    }
    let two_m = 2.0 * ctx.mass;
    let hbar = ctx.hbar;
    let integrand = |y: f64| match model.cell_value(y) {
        Ok(v) => (two_m * (v - energy).max(0.0)).sqrt() / hbar,
        Err(_) => f64::NAN,
    };
    let action_left = adaptive_quadrature(integrand, tp.left, mid, ACTION_TOL)?;
    let action_right = adaptive_quadrature(integrand, mid, tp.right, ACTION_TOL)?;

    let ln_g = ln_g_factor(n);
    let ln_eps_prefactor = 0.5 * (ln_factorial(n) + ln_g - 0.5 * PI.ln());
    let ln_norm_prefactor = 0.5 * (ln_g - (2.0 * PI).ln()) - ctx.l.ln();
    Ok(HoppingFactors {
        n,
        eps_l: (ln_eps_prefactor - action_left).exp(),
        eps_r: (ln_eps_prefactor - action_right).exp(),
        norm_l: parity(n) * (ln_norm_prefactor - action_right).exp(),
        norm_r: (ln_norm_prefactor - action_left).exp(),
        action_left,
        action_right,
        action_total: action_left + action_right,
        turning_points: tp,
    })
}

/// Hopping amplitude Δₙ from the barrier action.
pub fn hopping_delta(model: &PotentialModel, ctx: &SemiclassicalContext, n: u32) -> Result<f64> {
    Ok(barrier_action(model, ctx, n)?.delta(ctx))
}

/// Hopping amplitude Δₙ from the normalisation constants of the localised
/// states.
pub fn hopping_delta_via_overlap(model: &PotentialModel, ctx: &SemiclassicalContext, n: u32) -> Result<f64> {
    Ok(barrier_action(model, ctx, n)?.delta_from_overlap(ctx))
}

/// Bloch phases sπ/(N+1), s = 1..N.
pub fn bloch_phases(wells: usize) -> Vec<f64> {
    let denom = (wells + 1) as f64;
    (1..=wells).map(|s| s as f64 * PI / denom).collect()
}

/// Eₙ⁽⁰⁾ + (−1)ⁿ⁺¹ Δₙ cos(phase). Shared by the finite band and the periodic
/// dispersion so that both produce identical bits at coinciding phases.
pub fn band_energy_at_phase(e_n0: f64, delta: f64, n: u32, phase: f64) -> f64 {
    e_n0 - parity(n) * delta * phase.cos()
}

/// One split band of the N-well system.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BandResult {
    pub n: u32,
    pub e_n0: f64,
    pub delta_n: f64,
    /// δₙ(s) = (−1)ⁿ⁺¹ (Δₙ/ħω) cos(sπ/(N+1)).
    pub level_shifts: Vec<f64>,
    pub energies: Vec<f64>,
    pub bloch_phases: Vec<f64>,
    /// Column s−1 holds sin((j+1)sπ/(N+1)), j = 0..N−1, unnormalised.
    pub coefficients: Vec<Vec<f64>>,
}

impl BandResult {
    pub fn from_delta(n: u32, e_n0: f64, delta_n: f64, hbar_omega: f64, wells: usize) -> Result<Self> {
        if wells == 0 {
            return Err(Error::InvalidParameter("at least one well is required".into()));
        }
        let phases = bloch_phases(wells);
        let energies = phases.iter().map(|&p| band_energy_at_phase(e_n0, delta_n, n, p)).collect();
        let level_shifts = phases.iter().map(|&p| -parity(n) * delta_n / hbar_omega * p.cos()).collect();
        let denom = (wells + 1) as f64;
        let coefficients = (1..=wells)
            .map(|s| (0..wells).map(|j| ((j + 1) as f64 * s as f64 * PI / denom).sin()).collect())
            .collect();
        Ok(BandResult { n, e_n0, delta_n, level_shifts, energies, bloch_phases: phases, coefficients })
    }

    pub fn wells(&self) -> usize {
        self.energies.len()
    }

    /// max − min of the band.
    pub fn width(&self) -> f64 {
        let (lo, hi) = self
            .energies
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &e| (lo.min(e), hi.max(e)));
        hi - lo
    }
}

/// The N energies of band `n` for a model with `wells` wells.
pub fn band_energies(model: &PotentialModel, ctx: &SemiclassicalContext, n: u32, wells: usize) -> Result<BandResult> {
    let delta = hopping_delta(model, ctx, n)?;
    BandResult::from_delta(n, ctx.level(n as f64), delta, ctx.hbar_omega(), wells)
}

/// Checks −π/a ≤ k < π/a.
pub fn check_brillouin_zone(k: f64, a: f64) -> Result<()> {
    let half_width = PI / a;
    if k.is_finite() && k >= -half_width && k < half_width {
        Ok(())
    } else {
        Err(Error::OutsideBrillouinZone { k, half_width })
    }
}

/// Band energy of the fully periodic extension at Bloch wavenumber `k`.
pub fn periodic_dispersion(model: &PotentialModel, ctx: &SemiclassicalContext, n: u32, k: f64) -> Result<f64> {
    check_brillouin_zone(k, ctx.a)?;
    let delta = hopping_delta(model, ctx, n)?;
    Ok(band_energy_at_phase(ctx.level(n as f64), delta, n, k * ctx.a))
}

/// Leading-order width 2Δₙ of the n-th narrow band of the Mathieu problem
/// for the cosine potential 2q cos(2x/l_c), in units where
/// `scale` = ħ²/(2 m l_c²).
pub fn mathieu_band_width_closed(n: u32, q: f64, scale: f64) -> f64 {
    let reduced = q / scale;
    let nf = n as f64;
    let ln_width = (4.0 * nf + 5.0) * 2.0_f64.ln() - ln_factorial(n) + 0.5 * (2.0 / PI).ln()
        + (0.5 * nf + 0.75) * reduced.ln()
        - 4.0 * reduced.sqrt();
    scale * ln_width.exp()
}

/// E(sin φ) − cos²φ · K(sin φ), for φ ∈ [0, π/2).
pub fn elliptic_barrier_integral(phi: f64) -> Result<f64> {
    if !(0.0..FRAC_PI_2).contains(&phi) {
        return Err(Error::Regime(format!("turning phase {phi} outside [0, π/2)")));
    }
    let k = phi.sin();
    let c = phi.cos();
    Ok(elliptic_e(k)? - c * c * elliptic_k(k)?)
}

/// Barrier action of the cosine potential in closed form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EllipticAction {
    /// π/2 − √((n+½)√(scale/q)), from the harmonic turning points.
    pub phi_m: f64,
    /// Turning phase solving 2q cos 2φ = Eₙ⁽⁰⁾ exactly, when it exists.
    pub phi_exact: Option<f64>,
    /// 4√(q/scale) · [E(sin φ_M) − cos²φ_M K(sin φ_M)].
    pub elliptic: f64,
    /// 4√(q/scale) − (n+½) − (n+½) ln(16√(q/scale)/(n+½)).
    pub asymptotic: f64,
}

impl EllipticAction {
    /// φ_exact − φ_M, the error made by using harmonic turning points.
    pub fn turning_phase_difference(&self) -> Option<f64> {
        self.phi_exact.map(|p| p - self.phi_m)
    }
}

pub fn mathieu_action_elliptic(n: u32, q: f64, scale: f64) -> Result<EllipticAction> {
    if !(q > 0.0 && scale > 0.0) {
        return Err(Error::InvalidParameter(format!("q and scale must be positive, got q = {q}, scale = {scale}")));
    }
    let nu = n as f64 + 0.5;
    let ratio = (scale / q).sqrt();
    let phi_m = FRAC_PI_2 - (nu * ratio).sqrt();
    if !(phi_m > 0.0) {
        return Err(Error::Regime(format!("level n = {n} is too high for the barrier at q/scale = {}", q / scale)));
    }
    let prefactor = 4.0 * (q / scale).sqrt();
    let elliptic = prefactor * elliptic_barrier_integral(phi_m)?;
    let asymptotic = prefactor - nu - nu * (16.0 * (q / scale).sqrt() / nu).ln();
    let cos_two_phi = -1.0 + 2.0 * nu * ratio;
    let phi_exact = (cos_two_phi <= 1.0).then(|| 0.5 * cos_two_phi.acos());
    Ok(EllipticAction { phi_m, phi_exact, elliptic, asymptotic })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::Units;

    #[test]
    fn g_factor_values() {
        // √π e^{-1/2} and √(2π)(3/2)^{3/2} e^{-3/2}
        assert!((g_factor(0) - PI.sqrt() * (-0.5_f64).exp()).abs() < 1e-15);
        assert!((g_factor(0) - 1.075_047_6).abs() < 1e-7);
        assert!((g_factor(1) - 1.027_507_7).abs() < 1e-7);
    }

    #[test]
    fn g_factor_decreases_to_one() {
        let mut prev = g_factor(0);
        for n in 1..=400 {
            let g = g_factor(n);
            assert!(g < prev && g > 1.0, "n = {n}: {g}");
            prev = g;
        }
        assert!((g_factor(400) - 1.0).abs() < 1e-3);
    }

    #[test]
    fn parabolic_turning_points() {
        let m = PotentialModel::parabolic_chain(0.0, 1.0, 10.0, 0.0, 3).unwrap();
        let ctx = SemiclassicalContext::new(&m, Units::natural()).unwrap();
        let tp = turning_points(&m, &ctx, 0).unwrap();
        assert!((tp.left - 1.0).abs() < 1e-12);
        assert!((tp.right - 9.0).abs() < 1e-12);
    }

    #[test]
    fn level_above_barrier() {
        let m = PotentialModel::cosine(1.0, 1.0, 3).unwrap();
        let ctx = SemiclassicalContext::new(&m, Units::natural()).unwrap();
        // ħω = √8 ≈ 2.83, so n = 1 sits at −2 + 4.24 > 2.
        assert!(matches!(turning_points(&m, &ctx, 1), Err(Error::LevelAboveBarrier { .. })));
        assert!(matches!(hopping_delta(&m, &ctx, 1), Err(Error::LevelAboveBarrier { .. })));
    }

    #[test]
    fn symmetric_cell_has_equal_halves() {
        let m = PotentialModel::cosine(25.0, 1.0, 3).unwrap();
        let ctx = SemiclassicalContext::new(&m, Units::natural()).unwrap();
        let f = barrier_action(&m, &ctx, 0).unwrap();
        assert!((f.eps_l - f.eps_r).abs() <= 1e-9 * f.eps_l);
        assert!((f.action_total - (f.action_left + f.action_right)).abs() == 0.0);
        assert!(f.norm_l > 0.0 && f.norm_r > 0.0);
        let f1 = barrier_action(&m, &ctx, 1).unwrap();
        assert!(f1.norm_l < 0.0 && f1.norm_r > 0.0);
    }

    #[test]
    fn three_delta_routes_agree() {
        let m = PotentialModel::parabolic_chain(-3.0, 2.0, 9.0, 0.5, 4).unwrap();
        let ctx = SemiclassicalContext::new(&m, Units { hbar: 1.0, mass: 1.5 }).unwrap();
        for n in 0..3 {
            let f = barrier_action(&m, &ctx, n).unwrap();
            let d = f.delta(&ctx);
            assert!(d > 0.0);
            assert!((f.delta_from_eps(&ctx) / d - 1.0).abs() < 1e-12);
            assert!((f.delta_from_overlap(&ctx) / d - 1.0).abs() < 1e-12);
            let identity = d * PI / (ctx.hbar_omega() * g_factor(n) * (-f.action_total).exp());
            assert!((identity - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn small_bands() {
        let b = BandResult::from_delta(0, 1.0, 0.2, 1.0, 1).unwrap();
        assert_eq!(b.energies, vec![1.0 - 0.2 * FRAC_PI_2.cos()]);
        assert!((b.energies[0] - 1.0).abs() < 1e-16);

        let b = BandResult::from_delta(0, 1.0, 0.2, 1.0, 2).unwrap();
        assert!((b.energies[0] - 0.9).abs() < 1e-15 && (b.energies[1] - 1.1).abs() < 1e-15);

        let b = BandResult::from_delta(0, 1.0, 0.2, 1.0, 3).unwrap();
        let h = 0.2 * std::f64::consts::SQRT_2 / 2.0;
        assert!((b.energies[0] - (1.0 - h)).abs() < 1e-15);
        assert!((b.energies[1] - 1.0).abs() < 1e-15);
        assert!((b.energies[2] - (1.0 + h)).abs() < 1e-15);
    }

    #[test]
    fn odd_band_is_reversed() {
        let b = BandResult::from_delta(1, 0.0, 1e-3, 1.0, 6).unwrap();
        assert!(b.energies.windows(2).all(|w| w[1] < w[0]));
        let b = BandResult::from_delta(2, 0.0, 1e-3, 1.0, 6).unwrap();
        assert!(b.energies.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn coefficient_columns_have_known_norm() {
        let b = BandResult::from_delta(0, 0.0, 1.0, 1.0, 9).unwrap();
        for col in &b.coefficients {
            let sq: f64 = col.iter().map(|c| c * c).sum();
            assert!((sq - 5.0).abs() < 1e-12);
        }
    }

    #[test]
    fn brillouin_zone_edges() {
        assert!(check_brillouin_zone(-PI, 1.0).is_ok());
        assert!(check_brillouin_zone(PI, 1.0).is_err());
        assert!(check_brillouin_zone(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn mathieu_closed_form_values() {
        let w = mathieu_band_width_closed(0, 25.0, 1.0);
        assert!((w / 5.884e-7 - 1.0).abs() < 1e-3, "{w}");
        let expected = 32.0 * (2.0 / PI).sqrt() * 49.0_f64.powf(0.75) * (-28.0_f64).exp();
        assert!((mathieu_band_width_closed(0, 49.0, 1.0) / expected - 1.0).abs() < 1e-13);
        let doubled = mathieu_band_width_closed(1, 2.0 * 30.0, 2.0);
        assert!((doubled / (2.0 * mathieu_band_width_closed(1, 30.0, 1.0)) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn elliptic_action_limits() {
        assert!(elliptic_barrier_integral(0.0).unwrap().abs() < 1e-15);
        assert!(elliptic_barrier_integral(FRAC_PI_2).is_err());
        let act = mathieu_action_elliptic(0, 25.0, 1.0).unwrap();
        assert!(((act.elliptic - act.asymptotic) / act.asymptotic).abs() < 0.03);
        assert!(act.turning_phase_difference().unwrap().abs() < 0.05);
        // Deep barrier: both forms converge.
        let deep = mathieu_action_elliptic(0, 1e6, 1.0).unwrap();
        assert!((deep.elliptic - deep.asymptotic).abs() < 1e-2);
        assert!(mathieu_action_elliptic(3, 1.0, 1.0).is_err());
    }
}
