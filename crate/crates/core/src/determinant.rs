//! Spectral zeta values, zeta-regularized determinants D±(λ) as entire
//! functions of complex λ, Taylor coefficients of log D±, and Stokes
//! multipliers.
//!
//! Everything is built from a [`ParitySpectrum`]: explicit levels up to the
//! summation horizon, and the Hurwitz-summed pinned tail beyond it. For every
//! N the determinant is
//!
//! ```text
//! D(λ) = exp(-Z'(0)) · Π_{explicit} (1 + λ/λ_k) · exp(Σ_{m≥1} (-1)^{m+1} λ^m T_m / m)
//! ```
//!
//! with T_m the tail power sums. For μ > 1 (N = 1) T_1 is the regularized
//! value, and the expression is identical to the genus-1 form
//! exp(-Z'(0) + Z(1) λ) Π (1 + λ/λ_k) e^{-λ/λ_k}.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use crate::constants::{dynamical_constants, DynamicalConstants};
use crate::error::{Error, Result};
use crate::numeric::KahanSum;
use crate::special::gamma::recip_gamma;
use crate::spectrum::{Parity, ParitySpectrum};

/// A regularized spectral zeta value Z±(s).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralZeta {
    pub parity: Parity,
    pub s: f64,
    pub value: f64,
    /// true when the defining series diverges (s ≤ μ) and the value is the
    /// analytic continuation
    pub regularized: bool,
    /// log10 of (sum of term magnitudes) / |value|
    pub cancellation_digits: f64,
}

impl SpectralZeta {
    pub fn precision_warning(&self) -> bool {
        self.cancellation_digits > 8.0
    }
}

/// Z±(s) for s > -μ, s ≠ μ.
pub fn zeta_value(spec: &ParitySpectrum, s: f64) -> Result<SpectralZeta> {
    let c = spec.constants();
    if s <= -c.mu {
        return Err(Error::Domain { what: "zeta value requires s > -mu", value: s });
    }
    if (s - c.mu).abs() < 1e-12 {
        return Err(Error::Pole { s });
    }
    let tail = spec.tail();
    let mut acc = KahanSum::new();
    let mut magnitude = 0.0;
    for &x in spec.horizon_levels() {
        let t = x.powf(-s);
        acc.add(t);
        magnitude += t;
    }
    let t = tail.first_level.powf(-s) * tail.scaled_sum(s)?;
    acc.add(t);
    magnitude += t.abs();
    let value = acc.value();
    let cancellation_digits = if value == 0.0 { f64::INFINITY } else { (magnitude / value.abs()).log10() };
    Ok(SpectralZeta { parity: spec.parity, s, value, regularized: s <= c.mu, cancellation_digits })
}

/// Z±'(0) = -Σ log λ_k, regularized.
pub fn zeta_prime_zero(spec: &ParitySpectrum) -> Result<f64> {
    let mut acc = KahanSum::new();
    for &x in spec.horizon_levels() {
        acc.add(-x.ln());
    }
    acc.add(-spec.tail().regularized_log_sum()?);
    Ok(acc.value())
}

/// Z±(s) from the first `count` levels with the density counterterms:
///
/// Σ_{i<count} λ_i^{-s} - (b0 μ/4π) λ_K^{μ-s}/(μ - s) + λ_K^{-s}/2,
///
/// λ_K the next level of the sector. Converges to [`zeta_value`] as count
/// grows, with error O(λ_K^{-s-μ}).
pub fn zeta_value_counterterm(spec: &ParitySpectrum, s: f64, count: usize) -> Result<f64> {
    let c = spec.constants();
    if (s - c.mu).abs() < 1e-12 {
        return Err(Error::Pole { s });
    }
    let mut acc = KahanSum::new();
    for i in 0..count {
        acc.add(spec.level(spec.label_of_index(i))?.powf(-s));
    }
    let lk = spec.level(spec.label_of_index(count))?;
    acc.add(-c.b0 * c.mu / (4.0 * PI) * lk.powf(c.mu - s) / (c.mu - s));
    acc.add(0.5 * lk.powf(-s));
    Ok(acc.value())
}

/// Z±'(0) from the first `count` levels with the counterterms
/// (b0/4π) λ_K^μ (log λ_K - 1/μ) - (1/2) log λ_K.
pub fn zeta_prime_zero_counterterm(spec: &ParitySpectrum, count: usize) -> Result<f64> {
    let c = spec.constants();
    let mut acc = KahanSum::new();
    for i in 0..count {
        acc.add(-spec.level(spec.label_of_index(i))?.ln());
    }
    let lk = spec.level(spec.label_of_index(count))?;
    acc.add(c.b0 / (4.0 * PI) * lk.powf(c.mu) * (lk.ln() - 1.0 / c.mu));
    acc.add(-0.5 * lk.ln());
    Ok(acc.value())
}

/// Complex number kept as mantissa · e^{log_scale} so long products neither
/// overflow nor underflow.
#[derive(Debug, Clone, Copy)]
struct Scaled {
    mantissa: Complex64,
    log_scale: f64,
}

impl Scaled {
    fn one() -> Self {
        Self { mantissa: Complex64::new(1.0, 0.0), log_scale: 0.0 }
    }

    fn mul(&mut self, z: Complex64) {
        self.mantissa *= z;
        let r = self.mantissa.norm();
        if r > 1e100 || (r < 1e-100 && r > 0.0) {
            self.mantissa /= r;
            self.log_scale += r.ln();
        }
    }

    fn value(&self) -> Complex64 {
        self.mantissa * self.log_scale.exp()
    }

    /// log |value|
    fn ln_norm(&self) -> f64 {
        self.mantissa.norm().ln() + self.log_scale
    }
}

/// D±(λ) of one parity sector, with Z'(0) precomputed.
#[derive(Debug, Clone)]
pub struct SectorDeterminant<'a> {
    spec: &'a ParitySpectrum,
    ln_d0: f64,
}

impl<'a> SectorDeterminant<'a> {
    pub fn new(spec: &'a ParitySpectrum) -> Result<Self> {
        let ln_d0 = -zeta_prime_zero(spec)?;
        Ok(Self { spec, ln_d0 })
    }

    pub fn parity(&self) -> Parity {
        self.spec.parity
    }

    /// D(0) = exp(-Z'(0)).
    pub fn at_zero(&self) -> f64 {
        self.ln_d0.exp()
    }

    fn check_radius(&self, lambda: Complex64) -> Result<()> {
        let radius = self.spec.validated_radius();
        if lambda.norm() > radius {
            return Err(Error::Radius { modulus: lambda.norm(), radius });
        }
        Ok(())
    }

    fn scaled(&self, lambda: Complex64) -> Result<Scaled> {
        let c = self.spec.constants();
        if c.is_harmonic() {
            return Ok(Scaled { mantissa: harmonic_determinant(self.spec.parity, lambda), log_scale: 0.0 });
        }
        self.check_radius(lambda)?;
        let mut prod = Scaled::one();
        for &x in self.spec.horizon_levels() {
            prod.mul(1.0 + lambda / x);
        }
        let tail = self.spec.tail();
        let series = tail.complex_series(lambda / tail.first_level, 1, |m| {
            if m % 2 == 1 {
                1.0 / m as f64
            } else {
                -1.0 / m as f64
            }
        })?;
        prod.mul(Complex64::from_polar(1.0, series.im));
        prod.log_scale += series.re + self.ln_d0;
        Ok(prod)
    }

    pub fn eval(&self, lambda: Complex64) -> Result<Complex64> {
        Ok(self.scaled(lambda)?.value())
    }

    /// log |D(λ)|, finite even where D itself would overflow.
    pub fn ln_abs(&self, lambda: Complex64) -> Result<f64> {
        Ok(self.scaled(lambda)?.ln_norm())
    }
}

/// Closed form for N = 2:
/// D±(λ) = 2^{±1/2} √(2π) 2^{-λ/2} / Γ((2 ∓ 1 + λ)/4).
pub fn harmonic_determinant(parity: Parity, lambda: Complex64) -> Complex64 {
    let sign = parity.sign();
    let pref = 2f64.powf(0.5 * sign) * (2.0 * PI).sqrt();
    let shift = Complex64::new(2.0 - sign, 0.0);
    pref * (-(lambda * 0.5) * 2f64.ln()).exp() * recip_gamma((shift + lambda) / 4.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeterminantValue {
    pub lambda: Complex64,
    pub d_plus: Complex64,
    pub d_minus: Complex64,
    pub d_full: Complex64,
    /// 0 for N > 2 (and N = 2), 1 for N = 1
    pub genus: u32,
}

/// Both sector determinants of a degree, ready for repeated evaluation.
#[derive(Debug, Clone)]
pub struct Determinant<'a> {
    pub constants: DynamicalConstants,
    pub even: SectorDeterminant<'a>,
    pub odd: SectorDeterminant<'a>,
}

impl<'a> Determinant<'a> {
    pub fn new(even: &'a ParitySpectrum, odd: &'a ParitySpectrum) -> Result<Self> {
        if even.parity != Parity::Even {
            return Err(Error::ParityMismatch { label: even.parity.offset(), expected: "even" });
        }
        if odd.parity != Parity::Odd {
            return Err(Error::ParityMismatch { label: odd.parity.offset(), expected: "odd" });
        }
        if even.degree != odd.degree {
            return Err(Error::Domain { what: "sector spectra of different degrees", value: odd.degree as f64 });
        }
        Ok(Self {
            constants: dynamical_constants(even.degree)?,
            even: SectorDeterminant::new(even)?,
            odd: SectorDeterminant::new(odd)?,
        })
    }

    pub fn sector(&self, parity: Parity) -> &SectorDeterminant<'a> {
        match parity {
            Parity::Even => &self.even,
            Parity::Odd => &self.odd,
        }
    }

    pub fn eval(&self, lambda: Complex64) -> Result<DeterminantValue> {
        let d_plus = self.even.eval(lambda)?;
        let d_minus = self.odd.eval(lambda)?;
        let genus = if self.constants.mu > 1.0 { 1 } else { 0 };
        Ok(DeterminantValue { lambda, d_plus, d_minus, d_full: d_plus * d_minus, genus })
    }

    /// D±(e^{iℓφ} λ).
    pub fn rotated(&self, parity: Parity, shift: i64, lambda: Complex64) -> Result<Complex64> {
        let rot = Complex64::from_polar(1.0, self.constants.rotation(shift));
        self.sector(parity).eval(rot * lambda)
    }

    /// Full D(e^{iℓφ} λ) = D⁺ D⁻ at the rotated point.
    pub fn rotated_full(&self, shift: i64, lambda: Complex64) -> Result<Complex64> {
        Ok(self.rotated(Parity::Even, shift, lambda)? * self.rotated(Parity::Odd, shift, lambda)?)
    }

    /// Stokes multiplier
    /// C_ℓ(λ) = (2i)^{-1} (e^{iφ/2} D⁺_ℓ D⁻_{ℓ+2} - e^{-iφ/2} D⁺_{ℓ+2} D⁻_ℓ).
    pub fn stokes(&self, shift: i64, lambda: Complex64) -> Result<Complex64> {
        let half = Complex64::from_polar(1.0, self.constants.phi / 2.0);
        let a = self.rotated(Parity::Even, shift, lambda)? * self.rotated(Parity::Odd, shift + 2, lambda)?;
        let b = self.rotated(Parity::Even, shift + 2, lambda)? * self.rotated(Parity::Odd, shift, lambda)?;
        Ok((half * a - half.conj() * b) / Complex64::new(0.0, 2.0))
    }
}

pub fn det_value(even: &ParitySpectrum, odd: &ParitySpectrum, lambda: Complex64) -> Result<DeterminantValue> {
    Determinant::new(even, odd)?.eval(lambda)
}

/// C₀(λ) for the degree of the given spectra.
pub fn stokes_multiplier(even: &ParitySpectrum, odd: &ParitySpectrum, lambda: Complex64) -> Result<Complex64> {
    if even.degree == 2 {
        return Err(Error::UnsupportedDegree { degree: 2, operation: "stokes_multiplier" });
    }
    Determinant::new(even, odd)?.stokes(0, lambda)
}

/// Taylor coefficients of log D± about λ = 0: c_0 = -Z'(0),
/// c_n = (-1)^{n+1} Z(n)/n.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogDetTaylor {
    pub even: Vec<f64>,
    pub odd: Vec<f64>,
    /// radius of convergence per sector: the lowest level
    pub radius_even: f64,
    pub radius_odd: f64,
}

impl LogDetTaylor {
    /// exp of the truncated series for one sector.
    pub fn eval(&self, parity: Parity, lambda: Complex64) -> Complex64 {
        let coeffs = match parity {
            Parity::Even => &self.even,
            Parity::Odd => &self.odd,
        };
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in coeffs.iter().rev() {
            acc = acc * lambda + c;
        }
        acc.exp()
    }
}

pub const MAX_TAYLOR_ORDER: usize = 12;

pub fn log_det_taylor(even: &ParitySpectrum, odd: &ParitySpectrum, n_max: usize) -> Result<LogDetTaylor> {
    if even.degree == 2 {
        return Err(Error::UnsupportedDegree { degree: 2, operation: "log_det_taylor" });
    }
    if n_max > MAX_TAYLOR_ORDER {
        return Err(Error::Domain { what: "Taylor order must be <= 12", value: n_max as f64 });
    }
    let coeffs = |spec: &ParitySpectrum| -> Result<Vec<f64>> {
        let mut out = vec![-zeta_prime_zero(spec)?];
        for n in 1..=n_max {
            let z = zeta_value(spec, n as f64)?.value;
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            out.push(sign * z / n as f64);
        }
        Ok(out)
    };
    Ok(LogDetTaylor {
        even: coeffs(even)?,
        odd: coeffs(odd)?,
        radius_even: even.level(0)?,
        radius_odd: odd.level(1)?,
    })
}

/// a0 = b0 / (2 sin πμ), the leading coefficient of log D(λ) ~ a0 λ^μ.
pub fn asymptotic_a0(degree: u32) -> Result<f64> {
    dynamical_constants(degree)?
        .a0
        .ok_or(Error::UnsupportedDegree { degree, operation: "asymptotic_a0" })
}

/// |log D(λ) / (a0 λ^μ) - 1| at a large positive λ.
pub fn asymptotic_check(even: &ParitySpectrum, odd: &ParitySpectrum, lambda: f64) -> Result<f64> {
    let a0 = asymptotic_a0(even.degree)?;
    if lambda < 20.0 {
        return Err(Error::Domain { what: "asymptotic check needs lambda >= 20", value: lambda });
    }
    let det = Determinant::new(even, odd)?;
    let z = Complex64::new(lambda, 0.0);
    let ln_d = det.even.ln_abs(z)? + det.odd.ln_abs(z)?;
    Ok((ln_d / (a0 * lambda.powf(det.constants.mu)) - 1.0).abs())
}
