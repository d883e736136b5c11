//! Gamma and log-gamma via the Lanczos approximation (g = 7, 9 terms).

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

fn lanczos_sum(x: f64) -> f64 {
    // x here is the shifted argument z - 1
    let mut acc = LANCZOS_COEFFS[0];
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    acc
}

/// `ln Γ(x)` for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain { what: "log-gamma requires x > 0", value: x });
    }
    Ok(ln_gamma_unchecked(x))
}

pub(crate) fn ln_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        // reflection; sin(πx) > 0 on (0, 1/2)
        return PI.ln() - (PI * x).sin().ln() - ln_gamma_unchecked(1.0 - x);
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    HALF_LN_TWO_PI + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln()
}

/// `Γ(x)` for `x > 0`, computed as `exp(ln Γ(x))`. Overflows to `+inf`
/// beyond x ≈ 171.6.
pub fn gamma(x: f64) -> Result<f64> {
    if x < 0.5 && x > 0.0 {
        // direct reflection keeps full relative accuracy near the pole
        return Ok(PI / ((PI * x).sin() * gamma(1.0 - x)?));
    }
    ln_gamma(x).map(f64::exp)
}

/// `1/Γ(z)` for complex `z`; entire, vanishing at the non-positive integers.
pub fn recip_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // 1/Γ(z) = sin(πz) Γ(1 - z) / π
        let s = (z * PI).sin();
        return s * (1.0 / recip_gamma(Complex64::new(1.0, 0.0) - z)) / PI;
    }
    let zm = z - 1.0;
    let mut acc = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (zm + i as f64);
    }
    let t = zm + LANCZOS_G + 0.5;
    let ln_g = HALF_LN_TWO_PI + (zm + 0.5) * t.ln() - t + acc.ln();
    (-ln_g).exp()
}
