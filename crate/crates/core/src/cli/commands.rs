//! The five subcommands. Each returns a report; failures detected after the
//! report is built (e.g. a verification outside tolerance) are returned in
//! [`Outcome::failure`] so the report is still written.

use std::f64::consts::PI;

use crate::lattice::{
    circulant_spectrum, degeneracy_partners, distinct_level_count, nondegenerate_levels, ChainHamiltonian,
    RingHamiltonian,
};
use crate::oracle::fd::{default_domain, fd_schrodinger_eigs, fit_band_pattern};
use crate::oracle::mathieu::{mathieu_characteristics, minimum_basis, CONVERGENCE_TOL};
use crate::potentials::{validate_context, DiagnosticFlag, PotentialModel, SemiclassicalContext, Units};
use crate::semiclassics::{
    band_energies, band_energy_at_phase, check_brillouin_zone, hopping_delta, mathieu_action_elliptic,
    mathieu_band_width_closed, ACTION_TOL, TURNING_POINT_TOL,
};

use super::config::{Options, ScaleConvention};
use super::output::{Cell, Report};
use super::CliError;

pub const DEFAULT_K_POINTS: usize = 64;
pub const DEFAULT_FD_GRID: usize = 8192;
pub const DEFAULT_VERIFY_TOL: f64 = 1e-4;
pub const DEFAULT_RATIO_TOL: f64 = 0.25;
pub const DEFAULT_GAP_MIN: f64 = 10.0;
pub const MIN_CORRELATION: f64 = 0.99;

pub struct Outcome {
    pub report: Report,
    pub warnings: Vec<String>,
    pub failure: Option<String>,
}

impl Outcome {
    fn ok(report: Report) -> Self {
        Outcome { report, warnings: Vec::new(), failure: None }
    }
}

fn units_meta(report: &mut Report, convention: ScaleConvention, units: Units) {
    report.meta("scale_convention", convention.name());
    report.meta("hbar", units.hbar);
    report.meta("mass", units.mass);
}

fn model_meta(report: &mut Report, model: &PotentialModel) {
    report.meta("potential", model.family_name());
    match model {
        PotentialModel::Cosine(c) => {
            report.meta("q", c.q);
            report.meta("lc", c.lc);
        }
        PotentialModel::ParabolicChain(p) => {
            report.meta("v0", p.v0);
            report.meta("curvature", p.curvature);
            report.meta("a", p.a);
            report.meta("x1", p.x1);
        }
        PotentialModel::Tabulated(t) => {
            report.meta("table_samples", t.table().xs().len());
            report.meta("interpolation", format!("{:?}", t.table().interpolation()).to_lowercase());
            report.meta("period", model.period());
            report.meta("first_minimum", model.first_minimum());
        }
    }
    report.meta("wells", model.wells());
}

fn flag_text(flag: &DiagnosticFlag) -> String {
    match flag {
        DiagnosticFlag::NarrowBarrier { a_over_l } => format!("narrow barrier: a/l = {a_over_l:.4} < 5"),
        DiagnosticFlag::LargeLevelShift { n, shift } => format!("band {n}: level shift {shift:.4e} exceeds 0.1"),
        DiagnosticFlag::LevelAboveBarrier { n } => format!("band {n}: level is not below the barrier top"),
    }
}

struct Setup {
    convention: ScaleConvention,
    units: Units,
    model: PotentialModel,
    ctx: SemiclassicalContext,
}

fn setup(o: &Options, default_convention: ScaleConvention) -> Result<Setup, CliError> {
    let convention = o.scale_convention.unwrap_or(default_convention);
    let units = o.units(convention)?;
    let model = o.model(units)?;
    let ctx = SemiclassicalContext::new(&model, units)?;
    Ok(Setup { convention, units, model, ctx })
}

fn require_bands(o: &Options) -> Result<&[u32], CliError> {
    if o.n.is_empty() {
        Err(CliError::validation("missing required option --n"))
    } else {
        Ok(&o.n)
    }
}

fn diagnostics(report: &mut Report, s: &Setup, bands: &[u32]) -> Vec<String> {
    let diag = validate_context(&s.model, &s.ctx, bands);
    report.meta("a_over_l", diag.a_over_l);
    report.meta("periodicity_violation", diag.periodicity_violation);
    let flags: Vec<String> = diag.flags.iter().map(flag_text).collect();
    report.meta("diagnostics", if flags.is_empty() { "clear".to_string() } else { flags.join("; ") });
    flags
}

pub fn bands(o: &Options) -> Result<Outcome, CliError> {
    let s = setup(o, ScaleConvention::Natural)?;
    let bands = require_bands(o)?;
    let mut report = Report::new("bands", vec!["n", "s", "bloch_phase", "energy", "delta_n_shift"]);
    model_meta(&mut report, &s.model);
    units_meta(&mut report, s.convention, s.units);
    report.meta("action_tol", ACTION_TOL);
    report.meta("turning_point_tol", TURNING_POINT_TOL);
    report.meta("hbar_omega", s.ctx.hbar_omega());
    let warnings = diagnostics(&mut report, &s, bands);
    for &n in bands {
        let band = band_energies(&s.model, &s.ctx, n, s.ctx.wells)?;
        report.meta(&format!("e_n0[{n}]"), band.e_n0);
        report.meta(&format!("delta_n[{n}]"), band.delta_n);
        for (i, e) in band.energies.iter().enumerate() {
            report.row(vec![
                n.into(),
                (i + 1).into(),
                band.bloch_phases[i].into(),
                (*e).into(),
                band.level_shifts[i].into(),
            ]);
        }
    }
    Ok(Outcome { report, warnings, failure: None })
}

pub fn dispersion(o: &Options) -> Result<Outcome, CliError> {
    let s = setup(o, ScaleConvention::Natural)?;
    let bands = require_bands(o)?;
    let a = s.ctx.a;
    let ks: Vec<f64> = if o.k.is_empty() {
        let m = o.k_points.unwrap_or(DEFAULT_K_POINTS);
        if m == 0 {
            return Err(CliError::validation("--k-points must be positive"));
        }
        (0..m).map(|j| -PI / a + 2.0 * PI * j as f64 / (m as f64 * a)).collect()
    } else {
        o.k.clone()
    };
    for &k in &ks {
        check_brillouin_zone(k, a)?;
    }
    let mut report = Report::new("dispersion", vec!["n", "k", "ka", "energy"]);
    model_meta(&mut report, &s.model);
    units_meta(&mut report, s.convention, s.units);
    report.meta("action_tol", ACTION_TOL);
    report.meta("brillouin_half_width", PI / a);
    let warnings = diagnostics(&mut report, &s, bands);
    for &n in bands {
        let delta = hopping_delta(&s.model, &s.ctx, n)?;
        let e0 = s.ctx.level(n as f64);
        report.meta(&format!("e_n0[{n}]"), e0);
        report.meta(&format!("delta_n[{n}]"), delta);
        for &k in &ks {
            let energy = band_energy_at_phase(e0, delta, n, k * a);
            report.row(vec![n.into(), k.into(), (k * a).into(), energy.into()]);
        }
    }
    Ok(Outcome { report, warnings, failure: None })
}

pub fn mathieu(o: &Options) -> Result<Outcome, CliError> {
    let convention = o.scale_convention.unwrap_or(ScaleConvention::UnitEnergy);
    let units = o.units(convention)?;
    let lc = o.lc_or_default();
    if !(lc > 0.0) {
        return Err(CliError::validation(format!("--lc must be positive, got {lc}")));
    }
    let scale = units.energy_scale(lc);
    if o.q.is_empty() {
        return Err(CliError::validation("missing required option --q"));
    }
    if let Some(q) = o.q.iter().find(|q| !(**q > 0.0) || !q.is_finite()) {
        return Err(CliError::validation(format!("--q values must be positive, got {q}")));
    }
    let bands: Vec<u32> = if o.n.is_empty() { vec![0] } else { o.n.clone() };
    let max_order = *bands.iter().max().expect("non-empty") as usize;

    let mut report = Report::new(
        "mathieu",
        vec!["q", "n", "width_closed_form", "width_numeric", "ratio", "action_elliptic", "action_asymptotic", "basis_size"],
    );
    report.meta("lc", lc);
    units_meta(&mut report, convention, units);
    report.meta("energy_scale", scale);
    report.meta("convergence_tol", CONVERGENCE_TOL);
    for &q in &o.q {
        let reduced = q / scale;
        let basis = o.grid.unwrap_or_else(|| minimum_basis(reduced).max(max_order + 2));
        let chars = mathieu_characteristics(reduced, max_order, basis)?;
        for &n in &bands {
            let closed = mathieu_band_width_closed(n, q, scale);
            let numeric = scale * chars.band_widths[n as usize];
            let action = mathieu_action_elliptic(n, q, scale).ok();
            report.row(vec![
                q.into(),
                n.into(),
                closed.into(),
                numeric.into(),
                (closed / numeric).into(),
                action.map(|a| a.elliptic).into(),
                action.map(|a| a.asymptotic).into(),
                chars.basis_size.into(),
            ]);
        }
    }
    Ok(Outcome::ok(report))
}

/// Expands `--h`: all N values, or the first ⌊N/2⌋+1 mirrored onto the rest.
fn expand_ring_coefficients(h: &[f64], wells: usize) -> Result<Vec<f64>, CliError> {
    let half = wells / 2 + 1;
    if h.len() == wells {
        return Ok(h.to_vec());
    }
    if h.is_empty() || h.len() > half {
        return Err(CliError::validation(format!(
            "--h needs {wells} values or at most {half} leading values, got {}",
            h.len()
        )));
    }
    let mut full = vec![0.0; wells];
    for (m, v) in h.iter().enumerate() {
        full[m] = *v;
        if m > 0 {
            full[wells - m] = *v;
        }
    }
    Ok(full)
}

pub fn ring(o: &Options) -> Result<Outcome, CliError> {
    let mut report = Report::new("ring", vec!["label", "energy", "partner", "nondegenerate", "chain_s", "chain_energy"]);
    let (ring, chain) = if o.heuristic_from_chain {
        let s = setup(o, ScaleConvention::Natural)?;
        let n = Options::single(&o.n, "n")?;
        if s.ctx.wells < 2 {
            return Err(CliError::validation("a ring needs --wells of at least 2"));
        }
        model_meta(&mut report, &s.model);
        units_meta(&mut report, s.convention, s.units);
        let band = band_energies(&s.model, &s.ctx, n, s.ctx.wells)?;
        let chain = ChainHamiltonian::from_band(&band)?;
        report.meta("heuristic", "ring coefficients borrowed from the open-chain band; qualitative only");
        report.meta("n", n);
        (RingHamiltonian::nearest_neighbor(chain.onsite, chain.hopping, chain.wells)?, chain)
    } else {
        let wells = o.wells.ok_or_else(|| CliError::validation("missing required option --wells"))?;
        if wells < 2 {
            return Err(CliError::validation("a ring needs --wells of at least 2"));
        }
        if o.h.is_empty() {
            return Err(CliError::validation("missing required option --h (or --heuristic-from-chain)"));
        }
        let h = expand_ring_coefficients(&o.h, wells)?;
        let ring = RingHamiltonian::new(h)?;
        report.meta("wells", wells);
        let chain = ChainHamiltonian::new(ring.coefficients()[0], ring.coefficients()[1], wells)?;
        (ring, chain)
    };
    report.meta("h", ring.coefficients().iter().map(|v| format!("{v:.16e}")).collect::<Vec<_>>().join(";"));

    let levels = circulant_spectrum(&ring);
    let energies: Vec<f64> = levels.iter().map(|l| l.energy).collect();
    let pairs = degeneracy_partners(&levels);
    let lone = nondegenerate_levels(&energies);
    let chain_levels = chain.spectrum_by_mode();
    report.meta("ring_distinct_levels", distinct_level_count(&energies));
    report.meta("chain_distinct_levels", distinct_level_count(&chain_levels));
    report.meta(
        "nondegenerate_labels",
        lone.iter().map(|&i| levels[i].label.to_string()).collect::<Vec<_>>().join(";"),
    );
    for (i, level) in levels.iter().enumerate() {
        let partner = pairs.iter().find_map(|&(a, b)| {
            if a == level.label {
                Some(b)
            } else if b == level.label {
                Some(a)
            } else {
                None
            }
        });
        report.row(vec![
            level.label.into(),
            level.energy.into(),
            partner.into(),
            lone.contains(&i).into(),
            (i + 1).into(),
            chain_levels[i].into(),
        ]);
    }
    Ok(Outcome::ok(report))
}

pub fn verify(o: &Options) -> Result<Outcome, CliError> {
    let s = setup(o, ScaleConvention::Natural)?;
    let n = if o.n.is_empty() { 0 } else { Options::single(&o.n, "n")? };
    let grid = o.grid.unwrap_or(DEFAULT_FD_GRID);
    let tol = o.tol.unwrap_or(DEFAULT_VERIFY_TOL);
    let ratio_tol = o.ratio_tol.unwrap_or(DEFAULT_RATIO_TOL);
    let gap_min = o.gap_min.unwrap_or(DEFAULT_GAP_MIN);
    for (name, v) in [("tol", tol), ("ratio-tol", ratio_tol), ("gap-min", gap_min)] {
        if !(v > 0.0) {
            return Err(CliError::validation(format!("--{name} must be positive, got {v}")));
        }
    }
    let wells = s.ctx.wells;
    let hw = s.ctx.hbar_omega();
    let e0 = s.ctx.level(n as f64);
    let count = (n as usize + 1) * wells + 1;

    let (lo, hi) = s.model.domain();
    let (dlo, dhi) = default_domain(&s.model);
    let domain = (dlo.max(lo), dhi.min(hi));
    let spectrum = fd_schrodinger_eigs(&s.model, &s.ctx, domain, grid, count)?;

    let mut report =
        Report::new("verify", vec!["s", "bloch_phase", "energy_fd", "energy_fit", "energy_predicted", "residual", "convergence"]);
    model_meta(&mut report, &s.model);
    units_meta(&mut report, s.convention, s.units);
    report.meta("n", n);
    report.meta("grid", grid);
    report.meta("grid_spacing", spectrum.grid_spacing);
    report.meta("domain_lo", domain.0);
    report.meta("domain_hi", domain.1);
    report.meta("tol", tol);
    report.meta("ratio_tol", ratio_tol);
    report.meta("gap_min", gap_min);
    report.meta("boundary_amplitude", spectrum.boundary_amplitude);
    report.meta("e_n0", e0);

    let start = n as usize * wells;
    let band = &spectrum.eigenvalues[start..start + wells];
    let conv = &spectrum.convergence_estimate[start..start + wells];
    let max_conv = conv.iter().fold(0.0_f64, |m, c| m.max(*c));
    report.meta("max_convergence", max_conv);

    let mut failures = Vec::new();
    if spectrum.boundary_contaminated() {
        failures.push(format!("boundary contamination: wall amplitude {:.3e}", spectrum.boundary_amplitude));
    }
    if max_conv > tol * hw {
        failures.push(format!("grid not converged: |E(h) - E(h/2)| = {max_conv:.3e} exceeds {:.3e}", tol * hw));
    }

    if wells == 1 {
        let deviation = (band[0] - e0) / hw;
        report.meta("level_deviation", deviation);
        if deviation.abs() > ratio_tol {
            failures.push(format!("single-well level deviates from the harmonic value by {deviation:.3e} hbar*omega"));
        }
        report.row(vec![
            1usize.into(),
            (PI / 2.0).into(),
            band[0].into(),
            Cell::Empty,
            e0.into(),
            (band[0] - e0).into(),
            conv[0].into(),
        ]);
    } else {
        let predicted = band_energies(&s.model, &s.ctx, n, wells)?;
        let fit = fit_band_pattern(band, n)?;
        let width = band[wells - 1] - band[0];
        let mut gap = spectrum.eigenvalues[start + wells] - band[wells - 1];
        if start > 0 {
            gap = gap.min(band[0] - spectrum.eigenvalues[start - 1]);
        }
        let ratio = fit.delta / predicted.delta_n;
        report.meta("delta_predicted", predicted.delta_n);
        report.meta("delta_fit", fit.delta);
        report.meta("delta_ratio", ratio);
        report.meta("correlation", fit.correlation);
        report.meta("gap_over_width", gap / width);
        if !(gap / width >= gap_min) {
            failures.push(format!("band not isolated: gap/width = {:.3e} below {gap_min}", gap / width));
        }
        if !(fit.correlation > MIN_CORRELATION) {
            failures.push(format!("band pattern correlation {:.6} below {MIN_CORRELATION}", fit.correlation));
        }
        if !((ratio - 1.0).abs() <= ratio_tol) {
            failures.push(format!("fitted/predicted hopping ratio {ratio:.4} outside 1 ± {ratio_tol}"));
        }
        // Convergence estimates follow the ascending order; map to modes.
        let conv_by_mode: Vec<f64> = if n % 2 == 1 { conv.iter().rev().copied().collect() } else { conv.to_vec() };
        #[allow(clippy::needless_range_loop)]
        for i in 0..wells {
            report.row(vec![
                (i + 1).into(),
                predicted.bloch_phases[i].into(),
                fit.levels[i].into(),
                (fit.levels[i] - fit.residuals[i]).into(),
                predicted.energies[i].into(),
                fit.residuals[i].into(),
                conv_by_mode[i].into(),
            ]);
        }
    }
    report.meta("status", if failures.is_empty() { "pass" } else { "fail" });
    let failure = (!failures.is_empty()).then(|| failures.join("; "));
    Ok(Outcome { report, warnings: Vec::new(), failure })
}
