//! Tight-binding band of a finite cosine lattice.
//!
//! Run with `cargo run --example cosine_band`.

use nwell::{band_energies, PotentialModel, SemiclassicalContext, Units};

fn main() -> nwell::Result<()> {
    let wells = 6;
    let model = PotentialModel::cosine(25.0, 1.0, wells)?;
    let ctx = SemiclassicalContext::new(&model, Units::unit_energy_scale(1.0))?;

    for n in 0..2 {
        let band = band_energies(&model, &ctx, n, wells)?;
        println!("band n = {n}: E0 = {:.10}, delta = {:.6e}, width = {:.6e}", band.e_n0, band.delta_n, band.width());
        for (s, (e, phase)) in band.energies.iter().zip(&band.bloch_phases).enumerate() {
            println!("  s = {:>2}  phase = {phase:.6}  E = {e:.12}", s + 1);
        }
    }
    Ok(())
}
