//! Airy function Ai and its derivative for complex argument.
//!
//! Maclaurin series for |z| <= 6, the Poincaré asymptotic expansion beyond.
//! Outside the sector |arg z| <= 2π/3 the expansion is evaluated at the
//! rotated points jz, j²z and recombined through the three-solution relation
//! Ai(z) + j Ai(jz) + j² Ai(j²z) = 0, j = exp(2πi/3).

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numeric::bracketed_root;
use crate::special::gamma::gamma;

/// Series/asymptotic switchover radius.
pub const SWITCH_RADIUS: f64 = 6.0;
/// Documented working range.
pub const MAX_RADIUS: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AiryMethod {
    Series,
    Asymptotic,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct AiryValue {
    pub z: Complex64,
    pub ai: Complex64,
    pub ai_prime: Complex64,
    pub method: AiryMethod,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AiryKind {
    Ai,
    AiPrime,
}

/// j = exp(2πi/3).
pub fn cube_root_of_unity() -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI / 3.0)
}

/// (Ai(0), Ai'(0)).
pub fn airy_at_origin() -> (f64, f64) {
    let ai0 = 3f64.powf(-2.0 / 3.0) / gamma(2.0 / 3.0).expect("positive argument");
    let aip0 = -(3f64.powf(-1.0 / 3.0)) / gamma(1.0 / 3.0).expect("positive argument");
    (ai0, aip0)
}

/// ρ = -Ai'(0)/Ai(0) = 3^{5/6} Γ(2/3)² / (2π).
pub fn rho() -> f64 {
    let (ai0, aip0) = airy_at_origin();
    -aip0 / ai0
}

pub fn airy(z: Complex64) -> Result<AiryValue> {
    let r = z.norm();
    if !r.is_finite() || r > MAX_RADIUS {
        return Err(Error::OutOfRange { modulus: r, limit: MAX_RADIUS });
    }
    if r <= SWITCH_RADIUS {
        let (ai, ai_prime) = airy_series(z);
        Ok(AiryValue { z, ai, ai_prime, method: AiryMethod::Series })
    } else {
        let (ai, ai_prime) = airy_asymptotic(z);
        Ok(AiryValue { z, ai, ai_prime, method: AiryMethod::Asymptotic })
    }
}

/// Real-argument convenience wrapper returning (Ai(x), Ai'(x)).
pub fn airy_real(x: f64) -> Result<(f64, f64)> {
    let v = airy(Complex64::new(x, 0.0))?;
    Ok((v.ai.re, v.ai_prime.re))
}

/// Maclaurin series: Ai = c1 f - c2 g with f = Σ 3^k (1/3)_k z^{3k}/(3k)!,
/// g = Σ 3^k (2/3)_k z^{3k+1}/(3k+1)!.
pub fn airy_series(z: Complex64) -> (Complex64, Complex64) {
    let (c1, aip0) = airy_at_origin();
    let c2 = -aip0;
    let z3 = z * z * z;

    let one = Complex64::new(1.0, 0.0);
    let (mut f, mut fp, mut g, mut gp) = (one, z * z * 0.5, z, one);
    let (mut tf, mut tfp, mut tg, mut tgp) = (one, z * z * 0.5, z, one);
    for k in 1..400 {
        let kf = k as f64;
        tf *= z3 / ((3.0 * kf - 1.0) * (3.0 * kf));
        tg *= z3 / ((3.0 * kf) * (3.0 * kf + 1.0));
        tgp *= z3 / ((3.0 * kf) * (3.0 * kf - 2.0));
        f += tf;
        g += tg;
        gp += tgp;
        if k >= 2 {
            tfp *= z3 / ((3.0 * kf - 1.0) * (3.0 * kf - 3.0));
            fp += tfp;
        }
        let scale = 1.0 + f.norm() + g.norm() + fp.norm() + gp.norm();
        let largest = tf.norm().max(tg.norm()).max(tfp.norm()).max(tgp.norm());
        if k > 2 && largest < 1e-18 * scale {
            break;
        }
    }
    (f * c1 - g * c2, fp * c1 - gp * c2)
}

/// Asymptotic expansion, valid for large |z| in every direction.
pub fn airy_asymptotic(z: Complex64) -> (Complex64, Complex64) {
    let arg = z.arg();
    if arg.abs() <= 2.0 * PI / 3.0 {
        return airy_asymptotic_principal(z);
    }
    let j = cube_root_of_unity();
    let j2 = j * j;
    let (a1, d1) = airy_asymptotic_principal(j * z);
    let (a2, d2) = airy_asymptotic_principal(j2 * z);
    (-(j * a1) - j2 * a2, -(j2 * d1) - j * d2)
}

fn airy_asymptotic_principal(z: Complex64) -> (Complex64, Complex64) {
    let zeta = z.powf(1.5) * (2.0 / 3.0);
    let inv_zeta = 1.0 / zeta;
    let one = Complex64::new(1.0, 0.0);
    let (mut su, mut sv) = (one, one);
    let mut u = 1.0f64;
    let mut pow = one;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        let v = -u * (6.0 * kf + 1.0) / (6.0 * kf - 1.0);
        pow *= -inv_zeta;
        let tu = pow * u;
        let tv = pow * v;
        let size = tu.norm().max(tv.norm());
        if size > last {
            // past the smallest term of the divergent series
            break;
        }
        su += tu;
        sv += tv;
        last = size;
        if size < 1e-17 {
            break;
        }
    }
    let quarter = z.powf(0.25);
    let pref = (-zeta).exp() / (2.0 * PI.sqrt());
    (pref * su / quarter, -(pref * quarter * sv))
}

/// Semiclassical (Bohr–Sommerfeld) estimate of the label-k level of |q|,
/// i.e. of the magnitude of a zero of Ai' (k even) or Ai (k odd).
fn zero_estimate(k: f64) -> f64 {
    (3.0 * PI * (k + 0.5) / 4.0).powf(2.0 / 3.0)
}

/// Magnitude of the s-th negative zero of Ai (aₛ) or Ai' (a′ₛ), s ≥ 1.
pub fn airy_zero(kind: AiryKind, s: usize) -> Result<f64> {
    if s == 0 {
        return Err(Error::Domain { what: "zero index s must be >= 1", value: 0.0 });
    }
    let k = match kind {
        AiryKind::Ai => 2 * s - 1,
        AiryKind::AiPrime => 2 * s - 2,
    } as f64;
    let centre = zero_estimate(k);
    let lo = if k == 0.0 { 0.5 * centre } else { 0.5 * (zero_estimate(k - 1.0) + centre) };
    let hi = 0.5 * (centre + zero_estimate(k + 1.0));
    if hi > MAX_RADIUS {
        return Err(Error::OutOfRange { modulus: hi, limit: MAX_RADIUS });
    }
    let eval = |x: f64| -> Result<f64> {
        let (ai, aip) = airy_real(-x)?;
        Ok(match kind {
            AiryKind::Ai => ai,
            AiryKind::AiPrime => aip,
        })
    };
    let sign = if eval(lo)? < 0.0 { 1.0 } else { -1.0 };
    let root = bracketed_root(|x| Ok(sign * eval(x)?), lo, hi, 1e-3, 1e-14, k as usize)?;
    Ok(root.x)
}
