//! Infinite-lattice dispersion E(k) across the first Brillouin zone.

use std::f64::consts::PI;

use nwell::semiclassics::periodic_dispersion;
use nwell::{PotentialModel, SemiclassicalContext, Units};

fn main() -> nwell::Result<()> {
    let model = PotentialModel::cosine(16.0, 1.0, 3)?;
    let ctx = SemiclassicalContext::new(&model, Units::unit_energy_scale(1.0))?;
    // The zone is half-open, so ka = π is the same state as ka = −π.
    let points = 12;
    for n in 0..2 {
        println!("band {n}");
        for i in 0..points {
            let ka = -PI + 2.0 * PI * i as f64 / points as f64;
            let e = periodic_dispersion(&model, &ctx, n, ka / ctx.a)?;
            println!("  ka = {ka:>8.4}  E = {e:.12}");
        }
    }
    Ok(())
}
