//! Complete elliptic integrals of the first and second kind.
//!
//! Both take the modulus `k` (not the parameter `m = k²`) and are evaluated
//! with the arithmetic-geometric mean.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

const AGM_TOL: f64 = 1e-16;

/// K(k) = ∫₀^{π/2} dθ / √(1 − k² sin²θ), for 0 ≤ k < 1.
pub fn elliptic_k(k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k.abs()) {
        return Err(Error::InvalidParameter(format!(
            "elliptic K requires |k| < 1 (logarithmic divergence at 1), got {k}"
        )));
    }
    let (agm, _) = agm_with_sum(k);
    Ok(FRAC_PI_2 / agm)
}

/// E(k) = ∫₀^{π/2} √(1 − k² sin²θ) dθ, for 0 ≤ k ≤ 1.
pub fn elliptic_e(k: f64) -> Result<f64> {
    let k = k.abs();
    if !(k <= 1.0) {
        return Err(Error::InvalidParameter(format!("elliptic E requires |k| ≤ 1, got {k}")));
    }
    if k == 1.0 {
        return Ok(1.0);
    }
    let (agm, sum) = agm_with_sum(k);
    Ok(FRAC_PI_2 / agm * (1.0 - sum))
}

/// Returns AGM(1, √(1−k²)) and Σₙ 2ⁿ⁻¹ cₙ² with c₀ = k.
fn agm_with_sum(k: f64) -> (f64, f64) {
    let mut a = 1.0_f64;
    let mut b = (1.0 - k * k).sqrt();
    let mut c = k;
    let mut weight = 0.5;
    let mut sum = weight * c * c;
    for _ in 0..64 {
        if c.abs() <= AGM_TOL * a {
            break;
        }
        let next_a = 0.5 * (a + b);
        c = 0.5 * (a - b);
        b = (a * b).sqrt();
        a = next_a;
        weight *= 2.0;
        sum += weight * c * c;
    }
    (a, sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_modulus() {
        assert!((elliptic_k(0.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!((elliptic_e(0.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn unit_modulus() {
        assert_eq!(elliptic_e(1.0).unwrap(), 1.0);
        assert!(elliptic_k(1.0).is_err());
        assert!(elliptic_e(1.5).is_err());
    }

    #[test]
    fn legendre_relation() {
        // E K' + E' K − K K' = π/2
        for &k in &[0.1, 0.3, 0.5, 0.7, 0.9] {
            let kp = (1.0_f64 - k * k).sqrt();
            let (kk, ke) = (elliptic_k(k).unwrap(), elliptic_e(k).unwrap());
            let (kkp, kep) = (elliptic_k(kp).unwrap(), elliptic_e(kp).unwrap());
            assert!((ke * kkp + kep * kk - kk * kkp - FRAC_PI_2).abs() < 1e-13);
        }
    }

    #[test]
    fn e_approaches_one_near_unit_modulus() {
        let e = elliptic_e(1.0 - 1e-12).unwrap();
        assert!((e - 1.0).abs() < 1e-9);
    }
}
