//! Closing a chain into a ring: the circulant spectrum pairs up labels ±s
//! while the open chain stays non-degenerate.

use nwell::lattice::{
    bloch_rotation_check, circulant_spectrum, degeneracy_partners, distinct_level_count, nondegenerate_levels,
    ChainHamiltonian, RingHamiltonian,
};

fn main() -> nwell::Result<()> {
    let wells = 8;
    let (onsite, t) = (0.5, -1e-3);
    let chain = ChainHamiltonian::new(onsite, t, wells)?;
    let ring = RingHamiltonian::nearest_neighbor(onsite, t, wells)?;

    let levels = circulant_spectrum(&ring);
    let ring_energies: Vec<f64> = levels.iter().map(|l| l.energy).collect();
    for level in &levels {
        let (_, residual) = bloch_rotation_check(&ring, level.label);
        println!("label {:>3}: E = {:.12}  (rotation residual {residual:.1e})", level.label, level.energy);
    }
    println!("partners: {:?}", degeneracy_partners(&levels));
    println!(
        "non-degenerate ring labels: {:?}",
        nondegenerate_levels(&ring_energies).iter().map(|&i| levels[i].label).collect::<Vec<_>>()
    );
    println!("distinct levels: ring {}, chain {}", distinct_level_count(&ring_energies), distinct_level_count(&chain.spectrum()));

    // Longer-range couplings are given as the first row of the circulant.
    let ring = RingHamiltonian::new(vec![0.0, -1.0, 0.2, 0.0, 0.05, 0.0, 0.2, -1.0])?;
    let energies: Vec<f64> = circulant_spectrum(&ring).iter().map(|l| l.energy).collect();
    println!("with next-nearest couplings: {energies:.6?}");
    Ok(())
}
