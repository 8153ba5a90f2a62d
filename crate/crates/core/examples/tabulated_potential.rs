//! A potential supplied as a table of samples, interpolated by a cubic
//! spline, then run through diagnostics and the band calculation.

use std::f64::consts::PI;

use nwell::potentials::{validate_context, Interpolation, Table};
use nwell::{band_energies, PotentialModel, SemiclassicalContext, Units};

fn main() -> nwell::Result<()> {
    let wells = 5;
    let q = 20.0;
    let samples = 40 * wells + 1;
    let span = wells as f64 * PI;
    let xs: Vec<f64> = (0..samples).map(|i| span * i as f64 / (samples - 1) as f64).collect();
    // Minima of 2q cos(2x) sit at π/2 + jπ, inside the sampled span.
    let vs: Vec<f64> = xs.iter().map(|x| 2.0 * q * (2.0 * x).cos()).collect();

    let model = PotentialModel::tabulated(Table::new(xs, vs, Interpolation::Cubic)?)?;
    println!("wells = {}, period = {:.6}", model.wells(), model.period());

    let ctx = SemiclassicalContext::new(&model, Units::unit_energy_scale(1.0))?;
    let report = validate_context(&model, &ctx, &[0, 1]);
    println!("periodicity violation = {:.3e}, a/l = {:.3}", report.periodicity_violation, report.a_over_l);
    for flag in &report.flags {
        println!("flag: {flag:?}");
    }

    let band = band_energies(&model, &ctx, 0, wells)?;
    println!("E0 = {:.8}, delta = {:.6e}", band.e_n0, band.delta_n);

    let exact = PotentialModel::cosine(q, 1.0, wells)?;
    let exact_ctx = SemiclassicalContext::new(&exact, Units::unit_energy_scale(1.0))?;
    let reference = band_energies(&exact, &exact_ctx, 0, wells)?;
    println!("analytic cosine: E0 = {:.8}, delta = {:.6e}", reference.e_n0, reference.delta_n);
    Ok(())
}
