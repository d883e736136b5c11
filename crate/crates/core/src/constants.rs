//! Dynamical constants of the homogeneous potential |q|^N.

use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::special::gamma::ln_gamma;

/// Constants governing the spectrum of -d²/dq² + |q|^N.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DynamicalConstants {
    pub degree: u32,
    /// growth order (N + 2) / 2N
    pub mu: f64,
    /// symmetry angle 4π / (N + 2)
    pub phi: f64,
    /// cyclic order of the rotation group
    pub symmetry_order: u32,
    /// classical action constant: action at energy λ is b0 λ^μ
    pub b0: f64,
    /// leading asymptotic coefficient of log D; absent for the confluent N = 2
    pub a0: Option<f64>,
    /// parity offset (N - 2) / (N + 2)
    pub kappa: f64,
}

impl DynamicalConstants {
    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }

    /// N = 2 has integer growth order and needs closed forms in place of the
    /// generic series and products.
    pub fn is_harmonic(&self) -> bool {
        self.degree == 2
    }

    /// L φ / 4, the right-hand side of the cocycle relation.
    pub fn cocycle_total(&self) -> f64 {
        self.symmetry_order as f64 * self.phi / 4.0
    }

    /// e^{iℓφ} rotation angle for subscript ℓ.
    pub fn rotation(&self, shift: i64) -> f64 {
        shift as f64 * self.phi
    }
}

pub fn dynamical_constants(degree: u32) -> Result<DynamicalConstants> {
    if degree == 0 {
        return Err(Error::Domain { what: "degree N must be >= 1", value: 0.0 });
    }
    let n = degree as f64;
    let mu = (n + 2.0) / (2.0 * n);
    let phi = 4.0 * PI / (n + 2.0);
    let symmetry_order = if degree.is_multiple_of(2) { degree / 2 + 1 } else { degree + 2 };
    let ln_b0 = (2.0 * PI.sqrt() / n).ln() + ln_gamma(1.0 / n)? - ln_gamma(1.5 + 1.0 / n)?;
    let b0 = ln_b0.exp();
    let a0 = if degree == 2 { None } else { Some(b0 / (2.0 * (PI * mu).sin())) };
    let kappa = (n - 2.0) / (n + 2.0);
    Ok(DynamicalConstants { degree, mu, phi, symmetry_order, b0, a0, kappa })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DualityReport {
    pub degree: u32,
    pub dual_degree: u32,
    /// φ + φ' = 2π
    pub angles_supplementary: bool,
    /// 1/μ + 1/μ' = 2
    pub growth_orders_paired: bool,
    /// L = L'
    pub symmetry_orders_equal: bool,
    /// κ' = -κ
    pub offsets_opposite: bool,
}

impl DualityReport {
    pub fn all_hold(&self) -> bool {
        self.angles_supplementary
            && self.growth_orders_paired
            && self.symmetry_orders_equal
            && self.offsets_opposite
    }
}

/// The dual degree N' = 4/N, when it is an integer, with the four relations
/// that define the pairing checked numerically.
pub fn duality_check(degree: u32) -> Result<DualityReport> {
    if degree == 0 || 4 % degree != 0 {
        return Err(Error::NoIntegerDual { degree });
    }
    let dual_degree = 4 / degree;
    let c = dynamical_constants(degree)?;
    let d = dynamical_constants(dual_degree)?;
    let tol = 1e-14;
    Ok(DualityReport {
        degree,
        dual_degree,
        angles_supplementary: (c.phi + d.phi - 2.0 * PI).abs() < tol,
        growth_orders_paired: (1.0 / c.mu + 1.0 / d.mu - 2.0).abs() < tol,
        symmetry_orders_equal: c.symmetry_order == d.symmetry_order,
        offsets_opposite: (c.kappa + d.kappa).abs() < tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma::gamma;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn cubic_constants() {
        let c = dynamical_constants(3).unwrap();
        assert!(close(c.mu, 5.0 / 6.0, 1e-15));
        assert!(close(c.phi, 4.0 * PI / 5.0, 1e-15));
        assert_eq!(c.symmetry_order, 5);
        assert!(close(c.kappa, 0.2, 1e-15));
        let b0 = 2f64.powf(2.0 / 3.0) * 3f64.sqrt() / (5.0 * PI) * gamma(1.0 / 3.0).unwrap().powi(3);
        assert!(close(c.b0, b0, 1e-13));
        // for N = 3, sin πμ = 1/2, so a0 coincides with b0
        assert!(close(c.a0.unwrap(), b0, 1e-13));
    }

    #[test]
    fn quartic_constants() {
        let c = dynamical_constants(4).unwrap();
        assert!(close(c.mu, 0.75, 1e-15));
        assert!(close(c.phi, 2.0 * PI / 3.0, 1e-15));
        assert_eq!(c.symmetry_order, 3);
        assert!(close(c.kappa, 1.0 / 3.0, 1e-15));
        let b0 = (2.0 / PI).sqrt() / 3.0 * gamma(0.25).unwrap().powi(2);
        assert!(close(c.b0, b0, 1e-13));
        assert!(close(c.a0.unwrap(), b0 / 2f64.sqrt(), 1e-13));
    }

    #[test]
    fn linear_constants() {
        let c = dynamical_constants(1).unwrap();
        assert!(close(c.mu, 1.5, 1e-15));
        assert!(close(c.phi, 4.0 * PI / 3.0, 1e-15));
        assert_eq!(c.symmetry_order, 3);
        assert!(close(c.b0, 8.0 / 3.0, 1e-13));
        assert!(close(c.a0.unwrap(), -4.0 / 3.0, 1e-13));
        assert!(close(c.kappa, -1.0 / 3.0, 1e-15));
    }

    #[test]
    fn harmonic_constants_flag_a0() {
        let c = dynamical_constants(2).unwrap();
        assert_eq!(c.mu, 1.0);
        assert!(close(c.phi, PI, 1e-15));
        assert_eq!(c.symmetry_order, 2);
        assert_eq!(c.kappa, 0.0);
        assert!(c.a0.is_none());
        assert!(close(c.b0, PI, 1e-13));
    }

    #[test]
    fn cocycle_total_by_parity() {
        for n in 1..=12u32 {
            let c = dynamical_constants(n).unwrap();
            let want = if n % 2 == 1 { PI } else { PI / 2.0 };
            if n != 2 {
                assert!((c.cocycle_total() - want).abs() < 4.0 * f64::EPSILON, "N={n}");
            }
            assert!(c.kappa.abs() < 1.0);
        }
    }

    #[test]
    fn zero_degree_rejected() {
        assert!(dynamical_constants(0).is_err());
    }

    #[test]
    fn duality_pairs() {
        let r = duality_check(4).unwrap();
        assert_eq!(r.dual_degree, 1);
        assert!(r.all_hold());
        assert_eq!(duality_check(1).unwrap().dual_degree, 4);
        let h = duality_check(2).unwrap();
        assert_eq!(h.dual_degree, 2);
        assert!(h.all_hold());
        assert!(matches!(duality_check(3), Err(Error::NoIntegerDual { degree: 3 })));
        assert!(duality_check(6).is_err());
    }
}
