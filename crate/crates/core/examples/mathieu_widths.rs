//! Narrow Mathieu bands: exact widths from Fourier matrices against the
//! asymptotic formula, plus the elliptic-integral form of the action.

use nwell::oracle::mathieu::{mathieu_characteristics, minimum_basis};
use nwell::semiclassics::{mathieu_action_elliptic, mathieu_band_width_closed};

fn main() -> nwell::Result<()> {
    println!("{:>4} {:>2} {:>14} {:>14} {:>8}", "q", "n", "numeric", "closed form", "ratio");
    for q in [16.0, 25.0, 36.0, 49.0] {
        let m = mathieu_characteristics(q, 1, minimum_basis(q))?;
        for (n, numeric) in m.band_widths.iter().enumerate() {
            let closed = mathieu_band_width_closed(n as u32, q, 1.0);
            println!("{q:>4} {n:>2} {numeric:>14.6e} {closed:>14.6e} {:>8.4}", closed / numeric);
        }
    }

    let act = mathieu_action_elliptic(0, 25.0, 1.0)?;
    println!(
        "\nq = 25, n = 0: turning phase {:.8}, action {:.9} (elliptic) vs {:.9} (asymptotic)",
        act.phi_m, act.elliptic, act.asymptotic
    );
    Ok(())
}
