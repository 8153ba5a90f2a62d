//! Barrier action of a chain of truncated parabolas, numerically and in
//! closed form, together with both routes to the hopping amplitude.

use nwell::semiclassics::{barrier_action, hopping_delta, hopping_delta_via_overlap};
use nwell::{PotentialModel, SemiclassicalContext, Units};

/// 2[F(a/2l) − F(√c)] with F(u) = ½[u√(u² − c) − c ln(u + √(u² − c))], c = 2n + 1.
fn closed_form(n: u32, a_over_l: f64) -> f64 {
    let c = 2.0 * n as f64 + 1.0;
    let f = |u: f64| {
        let r = (u * u - c).max(0.0).sqrt();
        0.5 * (u * r - c * (u + r).ln())
    };
    2.0 * (f(0.5 * a_over_l) - f(c.sqrt()))
}

fn main() -> nwell::Result<()> {
    let model = PotentialModel::parabolic_chain_with_frequency(0.0, 1.0, 1.0, 12.0, 0.0, 4)?;
    let ctx = SemiclassicalContext::new(&model, Units::natural())?;
    let a_over_l = ctx.a / ctx.l;
    println!("a/l = {a_over_l:.4}");

    for n in 0..4 {
        let factors = barrier_action(&model, &ctx, n)?;
        let exact = closed_form(n, a_over_l);
        println!(
            "n = {n}: action = {:.12}  closed form = {exact:.12}  rel err = {:.2e}",
            factors.action_total,
            (factors.action_total - exact).abs() / exact
        );
        println!(
            "       delta (action) = {:.6e}  delta (overlap) = {:.6e}",
            hopping_delta(&model, &ctx, n)?,
            hopping_delta_via_overlap(&model, &ctx, n)?
        );
    }
    Ok(())
}
