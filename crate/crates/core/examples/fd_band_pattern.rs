//! Finite-difference spectrum of a four-well cosine chain, fitted to the
//! cosine band pattern and compared with the semiclassical splitting.

use nwell::oracle::fd::{default_domain, fd_schrodinger_eigs, fit_band_pattern};
use nwell::semiclassics::hopping_delta;
use nwell::{PotentialModel, SemiclassicalContext, Units};

fn main() -> nwell::Result<()> {
    let wells = 4;
    let model = PotentialModel::cosine(8.0, 1.0, wells)?;
    let ctx = SemiclassicalContext::new(&model, Units::natural())?;

    let spectrum = fd_schrodinger_eigs(&model, &ctx, default_domain(&model), 8192, wells + 1)?;
    println!("grid: {} points, h = {:.3e}", spectrum.grid_points, spectrum.grid_spacing);
    for (e, err) in spectrum.eigenvalues.iter().zip(&spectrum.convergence_estimate) {
        println!("  E = {e:.12}  (+/- {err:.1e})");
    }

    let fit = fit_band_pattern(&spectrum.eigenvalues[..wells], 0)?;
    let predicted = hopping_delta(&model, &ctx, 0)?;
    println!("fitted delta    = {:.6e} (correlation {:.8})", fit.delta, fit.correlation);
    println!("predicted delta = {predicted:.6e}");
    println!("ratio           = {:.4}", fit.delta / predicted);

    let gap = spectrum.eigenvalues[wells] - spectrum.eigenvalues[wells - 1];
    let width = spectrum.eigenvalues[wells - 1] - spectrum.eigenvalues[0];
    println!("gap / width     = {:.3e}", gap / width);
    Ok(())
}
