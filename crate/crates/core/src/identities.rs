//! Residual checks of the functional relations and sum rules satisfied by the
//! spectral determinants.
//!
//! Functional relations are sampled on a grid of complex λ and report the
//! residual relative to the magnitude of the terms involved. Sum rules are
//! scalar relations among zeta values and report absolute residuals.

use num_complex::Complex64;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::constants::{dynamical_constants, DynamicalConstants};
use crate::determinant::{zeta_prime_zero, zeta_value, Determinant};
use crate::error::{Error, Result};
use crate::special::airy::{airy, cube_root_of_unity, rho};
use crate::special::gamma::{gamma, ln_gamma};
use crate::spectrum::{Parity, ParitySpectrum};

pub const DEFAULT_THRESHOLD: f64 = 1e-5;
pub const SUM_RULE_THRESHOLD: f64 = 1e-6;
pub const CLOSED_FORM_THRESHOLD: f64 = 1e-5;
pub const ORACLE_THRESHOLD: f64 = 1e-9;
/// |D₁⁺D₂⁺| below which a pairing sample is skipped
pub const DIVISION_GUARD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ResidualMeasure {
    Absolute,
    Relative,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub identity_id: String,
    pub degree: u32,
    pub sample_points: Vec<Complex64>,
    pub max_abs_residual: f64,
    pub max_rel_residual: f64,
    pub threshold: f64,
    /// which residual is compared with the threshold
    pub measure: ResidualMeasure,
    pub passed: bool,
    /// sample points dropped by a division guard
    pub skipped: Vec<Complex64>,
}

/// Accumulates residuals for one identity.
struct Tally {
    id: String,
    degree: u32,
    points: Vec<Complex64>,
    skipped: Vec<Complex64>,
    max_abs: f64,
    max_rel: f64,
}

impl Tally {
    fn new(id: impl Into<String>, degree: u32) -> Self {
        Self { id: id.into(), degree, points: Vec::new(), skipped: Vec::new(), max_abs: 0.0, max_rel: 0.0 }
    }

    /// Records |lhs - rhs| against the scale Σ|term|.
    fn record(&mut self, lambda: Option<Complex64>, residual: Complex64, scale: f64) {
        if let Some(z) = lambda {
            self.points.push(z);
        }
        let abs = residual.norm();
        let rel = if scale > 0.0 { abs / scale } else { abs };
        self.max_abs = self.max_abs.max(abs);
        self.max_rel = self.max_rel.max(rel);
    }

    fn finish(self, threshold: f64, measure: ResidualMeasure) -> IdentityReport {
        let value = match measure {
            ResidualMeasure::Absolute => self.max_abs,
            ResidualMeasure::Relative => self.max_rel,
        };
        IdentityReport {
            identity_id: self.id,
            degree: self.degree,
            sample_points: self.points,
            max_abs_residual: self.max_abs,
            max_rel_residual: self.max_rel,
            threshold,
            measure,
            passed: value.is_finite() && value <= threshold,
            skipped: self.skipped,
        }
    }
}

/// 24 points on [0, λ₄] plus 8 points on the unit circle.
pub fn default_grid(even: &ParitySpectrum) -> Result<Vec<Complex64>> {
    let top = even.level(4)?;
    let mut grid: Vec<Complex64> = (0..24).map(|i| Complex64::new(top * i as f64 / 23.0, 0.0)).collect();
    for i in 0..8 {
        grid.push(Complex64::from_polar(1.0, 2.0 * PI * (i as f64 + 0.5) / 8.0));
    }
    Ok(grid)
}

fn require(c: &DynamicalConstants, ok: bool, operation: &'static str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::UnsupportedDegree { degree: c.degree, operation })
    }
}

fn phase(angle: f64) -> Complex64 {
    Complex64::from_polar(1.0, angle)
}

/// e^{iφ/4} D_ℓ⁺ D_{ℓ+1}⁻ - e^{-iφ/4} D_{ℓ+1}⁺ D_ℓ⁻ = 2i at subscript shift ℓ.
pub fn wronskian_residual(det: &Determinant, grid: &[Complex64], shift: i64) -> Result<IdentityReport> {
    let c = &det.constants;
    require(c, !c.is_harmonic(), "wronskian_residual")?;
    let q = phase(c.phi / 4.0);
    let mut tally = Tally::new(format!("wronskian_shift_{shift}"), c.degree);
    for &z in grid {
        let a = q * det.rotated(Parity::Even, shift, z)? * det.rotated(Parity::Odd, shift + 1, z)?;
        let b = q.conj() * det.rotated(Parity::Even, shift + 1, z)? * det.rotated(Parity::Odd, shift, z)?;
        tally.record(Some(z), a - b - Complex64::new(0.0, 2.0), a.norm() + b.norm() + 2.0);
    }
    Ok(tally.finish(DEFAULT_THRESHOLD, ResidualMeasure::Relative))
}

/// The Wronskian relation at every subscript shift ℓ = 0..L-1.
pub fn wronskian_all_shifts(det: &Determinant, grid: &[Complex64]) -> Result<Vec<IdentityReport>> {
    (0..det.constants.symmetry_order as i64).map(|l| wronskian_residual(det, grid, l)).collect()
}

/// Determinant of the 3×3 system formed by the three rotated Wronskian
/// relations, with the D_ℓ⁻ as unknowns (L = 3 only).
pub fn linear_system_determinant(det: &Determinant, lambda: Complex64) -> Result<Complex64> {
    let c = &det.constants;
    require(c, c.symmetry_order == 3, "linear_system_determinant")?;
    let q = phase(c.phi / 4.0);
    let p: Vec<Complex64> =
        (0..3).map(|l| det.rotated(Parity::Even, l, lambda)).collect::<Result<_>>()?;
    let zero = Complex64::new(0.0, 0.0);
    // row ℓ: e^{iφ/4} D_ℓ⁺ D_{ℓ+1}⁻ - e^{-iφ/4} D_{ℓ+1}⁺ D_ℓ⁻, columns D_0⁻, D_1⁻, D_2⁻
    let mut m = [[zero; 3]; 3];
    for l in 0..3 {
        let next = (l + 1) % 3;
        m[l][next] += q * p[l];
        m[l][l] -= q.conj() * p[next];
    }
    Ok(m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))
}

/// Δ = 2i sin(3φ/4) D₀⁺D₁⁺D₂⁺.
pub fn linear_system_report(det: &Determinant, grid: &[Complex64]) -> Result<IdentityReport> {
    let c = &det.constants;
    let mut tally = Tally::new("linear_system_determinant", c.degree);
    let pref = Complex64::new(0.0, 2.0 * (0.75 * c.phi).sin());
    for &z in grid {
        let delta = linear_system_determinant(det, z)?;
        let prod: Complex64 =
            (0..3).map(|l| det.rotated(Parity::Even, l, z)).collect::<Result<Vec<_>>>()?.iter().product();
        tally.record(Some(z), delta - pref * prod, 2.0 * prod.norm());
    }
    Ok(tally.finish(DEFAULT_THRESHOLD, ResidualMeasure::Relative))
}

/// Quartic pairing: each parity determinant as a rational function of the
/// rotated determinants of the other parity.
pub fn pairing_residual(det: &Determinant, grid: &[Complex64]) -> Result<Vec<IdentityReport>> {
    let c = &det.constants;
    require(c, c.degree == 4, "pairing_residual")?;
    let j = cube_root_of_unity();
    let j2 = j * j;
    let mut out = Vec::new();
    for (target, source, id, w1, w2) in [
        (Parity::Odd, Parity::Even, "pairing_odd_from_even", j2, j),
        (Parity::Even, Parity::Odd, "pairing_even_from_odd", j, j2),
    ] {
        let mut tally = Tally::new(id, c.degree);
        for &z in grid {
            let s: Vec<Complex64> = (0..3).map(|l| det.rotated(source, l, z)).collect::<Result<_>>()?;
            let denom = s[1] * s[2];
            if denom.norm() < DIVISION_GUARD {
                tally.skipped.push(z);
                continue;
            }
            let lhs = det.rotated(target, 0, z)?;
            let rhs = (s[0] - w1 * s[1] - w2 * s[2]) / denom;
            tally.record(Some(z), lhs - rhs, lhs.norm().max(rhs.norm()));
        }
        out.push(tally.finish(DEFAULT_THRESHOLD, ResidualMeasure::Relative));
    }
    Ok(out)
}

/// Linear-potential three-term dependence, product side:
/// D₀⁻ + j²D₁⁻ + j⁴D₂⁻ = 0 and D₀⁺ + jD₁⁺ + j²D₂⁺ = 0.
pub fn dependence_residual(det: &Determinant, grid: &[Complex64]) -> Result<Vec<IdentityReport>> {
    let c = &det.constants;
    require(c, c.degree == 1, "dependence_residual")?;
    let j = cube_root_of_unity();
    let mut out = Vec::new();
    for (parity, id, w) in [(Parity::Odd, "dependence_odd", j * j), (Parity::Even, "dependence_even", j)] {
        let mut tally = Tally::new(id, c.degree);
        for &z in grid {
            let d: Vec<Complex64> = (0..3).map(|l| det.rotated(parity, l, z)).collect::<Result<_>>()?;
            let r = d[0] + w * d[1] + w * w * d[2];
            tally.record(Some(z), r, d.iter().map(|x| x.norm()).sum());
        }
        out.push(tally.finish(DEFAULT_THRESHOLD, ResidualMeasure::Relative));
    }
    Ok(out)
}

/// (2√π Ai(z), -2√π Ai'(z)): the linear-potential determinants (D⁻, D⁺)
/// from the Airy oracle.
pub fn airy_determinants(z: Complex64) -> Result<(Complex64, Complex64)> {
    let v = airy(z)?;
    let s = 2.0 * PI.sqrt();
    Ok((v.ai * s, -v.ai_prime * s))
}

/// The dependence relation on the Airy side, with the same rotations.
pub fn airy_dependence_residual(grid: &[Complex64]) -> Result<Vec<IdentityReport>> {
    let c = dynamical_constants(1)?;
    let j = cube_root_of_unity();
    let mut odd = Tally::new("airy_dependence_odd", 1);
    let mut even = Tally::new("airy_dependence_even", 1);
    for &z in grid {
        let d: Vec<(Complex64, Complex64)> =
            (0..3).map(|l| airy_determinants(phase(c.rotation(l)) * z)).collect::<Result<_>>()?;
        let w = j * j;
        let r = d[0].0 + w * d[1].0 + w * w * d[2].0;
        odd.record(Some(z), r, d.iter().map(|x| x.0.norm()).sum());
        let r = d[0].1 + j * d[1].1 + j * j * d[2].1;
        even.record(Some(z), r, d.iter().map(|x| x.1.norm()).sum());
    }
    Ok(vec![
        odd.finish(ORACLE_THRESHOLD, ResidualMeasure::Relative),
        even.finish(ORACLE_THRESHOLD, ResidualMeasure::Relative),
    ])
}

/// The Wronskian relation evaluated on Airy functions.
pub fn airy_wronskian_residual(grid: &[Complex64]) -> Result<IdentityReport> {
    let c = dynamical_constants(1)?;
    let q = phase(c.phi / 4.0);
    let mut tally = Tally::new("airy_wronskian", 1);
    for &z in grid {
        let (m0, p0) = airy_determinants(z)?;
        let (m1, p1) = airy_determinants(phase(c.phi) * z)?;
        let a = q * p0 * m1;
        let b = q.conj() * p1 * m0;
        tally.record(Some(z), a - b - Complex64::new(0.0, 2.0), a.norm() + b.norm() + 2.0);
    }
    Ok(tally.finish(ORACLE_THRESHOLD, ResidualMeasure::Relative))
}

/// Residual of the branch-free cocycle polynomial in the full determinants
/// D_ℓ = D(e^{iℓφ} λ).
fn cocycle_polynomial(degree: u32, d: &[Complex64; 3]) -> (Complex64, f64) {
    if degree == 4 {
        // D₀D₁D₂ = D₀ + D₁ + D₂ + 2
        let p = d[0] * d[1] * d[2];
        (p - d[0] - d[1] - d[2] - 2.0, p.norm() + d.iter().map(|x| x.norm()).sum::<f64>() + 2.0)
    } else {
        // D₀² + D₁² + D₂² - 2(D₁D₂ + D₂D₀ + D₀D₁) + 4 = 0
        let sq = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
        let cross = d[1] * d[2] + d[2] * d[0] + d[0] * d[1];
        let scale = d.iter().map(|x| x.norm_sqr()).sum::<f64>()
            + 2.0 * (d[1] * d[2]).norm()
            + 2.0 * (d[2] * d[0]).norm()
            + 2.0 * (d[0] * d[1]).norm()
            + 4.0;
        (sq - cross * 2.0 + 4.0, scale)
    }
}

pub fn cocycle_polynomial_residual(det: &Determinant, grid: &[Complex64]) -> Result<IdentityReport> {
    let c = &det.constants;
    require(c, c.degree == 4 || c.degree == 1, "cocycle_polynomial_residual")?;
    let mut tally = Tally::new("cocycle_polynomial", c.degree);
    for &z in grid {
        let d = [det.rotated_full(0, z)?, det.rotated_full(1, z)?, det.rotated_full(2, z)?];
        let (r, scale) = cocycle_polynomial(c.degree, &d);
        tally.record(Some(z), r, scale);
    }
    Ok(tally.finish(DEFAULT_THRESHOLD, ResidualMeasure::Relative))
}

/// The linear-potential cocycle polynomial with D = -4π Ai Ai' from the oracle.
pub fn airy_cocycle_residual(grid: &[Complex64]) -> Result<IdentityReport> {
    let c = dynamical_constants(1)?;
    let mut tally = Tally::new("airy_cocycle_polynomial", 1);
    for &z in grid {
        let mut d = [Complex64::new(0.0, 0.0); 3];
        for (l, slot) in d.iter_mut().enumerate() {
            let (m, p) = airy_determinants(phase(c.rotation(l as i64)) * z)?;
            *slot = m * p;
        }
        let (r, scale) = cocycle_polynomial(1, &d);
        tally.record(Some(z), r, scale);
    }
    Ok(tally.finish(ORACLE_THRESHOLD, ResidualMeasure::Relative))
}

/// Stokes multiplier equations: C₀C₁C₂ = C₀ + C₁ + C₂ and D₀ = C₁C₀ - 1
/// (N = 4), C₂C₃ - C₀ = 1 (N = 3), C ≡ 1 (N = 1).
pub fn stokes_equation_residual(det: &Determinant, grid: &[Complex64]) -> Result<Vec<IdentityReport>> {
    let c = &det.constants;
    require(c, matches!(c.degree, 1 | 3 | 4), "stokes_equation_residual")?;
    let mut out = Vec::new();
    match c.degree {
        4 => {
            let mut cubic = Tally::new("stokes_product_equals_sum", 4);
            let mut link = Tally::new("stokes_determinant_link", 4);
            for &z in grid {
                let s: Vec<Complex64> = (0..3).map(|l| det.stokes(l, z)).collect::<Result<_>>()?;
                let p = s[0] * s[1] * s[2];
                cubic.record(Some(z), p - s[0] - s[1] - s[2], p.norm() + s.iter().map(|x| x.norm()).sum::<f64>());
                let d0 = det.rotated_full(0, z)?;
                let q = s[1] * s[0];
                link.record(Some(z), d0 - (q - 1.0), d0.norm() + q.norm() + 1.0);
            }
            out.push(cubic.finish(DEFAULT_THRESHOLD, ResidualMeasure::Relative));
            out.push(link.finish(DEFAULT_THRESHOLD, ResidualMeasure::Relative));
        }
        3 => {
            let mut t = Tally::new("stokes_quadratic_recursion", 3);
            for &z in grid {
                let c0 = det.stokes(0, z)?;
                let q = det.stokes(2, z)? * det.stokes(3, z)?;
                t.record(Some(z), q - c0 - 1.0, q.norm() + c0.norm() + 1.0);
            }
            out.push(t.finish(DEFAULT_THRESHOLD, ResidualMeasure::Relative));
        }
        _ => {
            let mut t = Tally::new("stokes_constant", 1);
            for &z in grid {
                let c0 = det.stokes(0, z)?;
                t.record(Some(z), c0 - 1.0, 1.0);
            }
            out.push(t.finish(DEFAULT_THRESHOLD, ResidualMeasure::Relative));
        }
    }
    Ok(out)
}

/// Which zeta quantity: Z±'(0) or Z±(n).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ZetaKey {
    PrimeAtZero(Parity),
    Value(Parity, u32),
}

impl ZetaKey {
    pub fn name(&self) -> String {
        let sign = |p: &Parity| if *p == Parity::Even { '+' } else { '-' };
        match self {
            ZetaKey::PrimeAtZero(p) => format!("Z{}'(0)", sign(p)),
            ZetaKey::Value(p, n) => format!("Z{}({n})", sign(p)),
        }
    }
}

/// Zeta values gathered for the sum-rule checks.
#[derive(Debug, Clone, Default)]
pub struct ZetaTable {
    pub degree: u32,
    pub values: BTreeMap<ZetaKey, f64>,
}

impl ZetaTable {
    pub fn new(degree: u32) -> Self {
        Self { degree, values: BTreeMap::new() }
    }

    /// Z±'(0) and Z±(n) for n = 0..=max_n (poles skipped).
    pub fn from_spectra(even: &ParitySpectrum, odd: &ParitySpectrum, max_n: u32) -> Result<Self> {
        let mut t = Self::new(even.degree);
        for spec in [even, odd] {
            t.values.insert(ZetaKey::PrimeAtZero(spec.parity), zeta_prime_zero(spec)?);
            for n in 0..=max_n {
                match zeta_value(spec, n as f64) {
                    Ok(z) => {
                        t.values.insert(ZetaKey::Value(spec.parity, n), z.value);
                    }
                    Err(Error::Pole { .. }) => {}
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(t)
    }

    pub fn insert(&mut self, key: ZetaKey, value: f64) {
        self.values.insert(key, value);
    }
}

/// Looks up values, remembering which ones were absent.
struct Lookup<'a> {
    table: &'a ZetaTable,
    missing: Vec<String>,
}

impl Lookup<'_> {
    fn get(&mut self, key: ZetaKey) -> f64 {
        match self.table.values.get(&key) {
            Some(v) => *v,
            None => {
                let name = key.name();
                if !self.missing.contains(&name) {
                    self.missing.push(name);
                }
                f64::NAN
            }
        }
    }

    fn plus(&mut self, n: u32) -> f64 {
        self.get(ZetaKey::Value(Parity::Even, n))
    }

    fn minus(&mut self, n: u32) -> f64 {
        self.get(ZetaKey::Value(Parity::Odd, n))
    }

    fn full(&mut self, n: u32) -> f64 {
        self.plus(n) + self.minus(n)
    }
}

/// Left-hand-side weights (sin((n - 1/2)φ/2), sin((n + 1/2)φ/2)) of the
/// rank-n sum rule w₊ Z⁺(n) - w₋ Z⁻(n) = P_n.
pub fn rank_weights(phi: f64, n: u32) -> (f64, f64) {
    let n = n as f64;
    (((n - 0.5) * phi / 2.0).sin(), ((n + 0.5) * phi / 2.0).sin())
}

/// Closed form of Z⁻'(0): log[(N+2)^{Nφ/8π} √π / Γ(φ/4π)].
pub fn odd_log_det_closed_form(degree: u32) -> Result<f64> {
    let c = dynamical_constants(degree)?;
    let n = degree as f64;
    Ok(n * c.phi / (8.0 * PI) * (n + 2.0).ln() + 0.5 * PI.ln() - ln_gamma(c.phi / (4.0 * PI))?)
}

/// Closed form of Z⁺(1) - Z⁻(1).
pub fn first_moment_gap_closed_form(degree: u32) -> Result<f64> {
    let c = dynamical_constants(degree)?;
    if c.is_harmonic() {
        return Err(Error::UnsupportedDegree { degree, operation: "first_moment_gap_closed_form" });
    }
    let n = degree as f64;
    let x = c.phi / (4.0 * PI);
    let g = gamma(x)? * gamma(2.0 * x)? * gamma(3.0 * x)? / gamma(0.5 + c.phi / (2.0 * PI))?;
    Ok((2.0 / (n + 2.0)).powf(n * c.phi / (2.0 * PI)) * (c.phi / 4.0).sin() * g / (2.0 * PI.sqrt()))
}

/// Every sum rule that applies to the table's degree.
pub fn sum_rule_report(table: &ZetaTable) -> Result<Vec<IdentityReport>> {
    let degree = table.degree;
    let c = dynamical_constants(degree)?;
    let mut lk = Lookup { table, missing: Vec::new() };
    let mut rules: Vec<(&'static str, f64, f64, f64)> = Vec::new();
    let mut rule = |id: &'static str, lhs: f64, rhs: f64, threshold: f64| rules.push((id, lhs, rhs, threshold));

    let zp = lk.get(ZetaKey::PrimeAtZero(Parity::Even));
    let zm = lk.get(ZetaKey::PrimeAtZero(Parity::Odd));
    rule("zeta_at_zero_even", lk.plus(0), 0.25, SUM_RULE_THRESHOLD);
    rule("zeta_at_zero_odd", lk.minus(0), -0.25, SUM_RULE_THRESHOLD);
    rule("log_det_sum_log_sine", zp + zm, (c.phi / 4.0).sin().ln(), SUM_RULE_THRESHOLD);
    rule("odd_log_det_closed_form", zm, odd_log_det_closed_form(degree)?, CLOSED_FORM_THRESHOLD);
    if !c.is_harmonic() {
        let (w1p, w1m) = rank_weights(c.phi, 1);
        rule("first_moment_balance", w1p * lk.plus(1) - w1m * lk.minus(1), 0.0, SUM_RULE_THRESHOLD);
        let (w2p, w2m) = rank_weights(c.phi, 2);
        let gap = lk.plus(1) - lk.minus(1);
        let q = (c.phi / 4.0).sin() * (2.0 * (c.phi / 4.0).cos() * gap).powi(2);
        rule("second_moment_balance", w2p * lk.plus(2) - w2m * lk.minus(2), q, SUM_RULE_THRESHOLD);
        rule("first_moment_gap_closed_form", gap, first_moment_gap_closed_form(degree)?, CLOSED_FORM_THRESHOLD);
    }
    if degree == 4 {
        let (z1, z2) = (lk.full(1), lk.full(2));
        rule("quartic_third_moment", lk.full(3), z1.powi(3) / 6.0 - z1 * z2 / 2.0, SUM_RULE_THRESHOLD);
    }
    if degree == 1 {
        let r = rho();
        let (z1, z2) = (lk.full(1), lk.full(2));
        let m1 = lk.minus(1);
        rule("linear_first_moment_even_vanishes", lk.plus(1), 0.0, SUM_RULE_THRESHOLD);
        rule("linear_second_moment_odd", lk.minus(2), m1 * m1, SUM_RULE_THRESHOLD);
        rule("linear_third_moment", lk.full(3), 2.5 * z1.powi(3) - 1.5 * z1 * z2, SUM_RULE_THRESHOLD);
        rule("linear_third_moment_by_parity", lk.full(3), m1.powi(3) - 1.5 * m1 * lk.plus(2), SUM_RULE_THRESHOLD);
        rule("airy_log_det_ratio", zp - zm, -r.ln(), SUM_RULE_THRESHOLD);
        rule("airy_first_moment_odd", m1, -r, SUM_RULE_THRESHOLD);
        rule("airy_second_moment_even", lk.plus(2), 1.0 / r, SUM_RULE_THRESHOLD);
        rule("airy_third_moment_even", lk.plus(3), 1.0, SUM_RULE_THRESHOLD);
        rule("airy_third_moment_odd", lk.minus(3), 0.5 - r.powi(3), SUM_RULE_THRESHOLD);
    }
    if !lk.missing.is_empty() {
        return Err(Error::MissingInput(lk.missing));
    }
    Ok(rules
        .into_iter()
        .map(|(id, lhs, rhs, threshold)| {
            let mut t = Tally::new(id, degree);
            t.record(None, Complex64::new(lhs - rhs, 0.0), lhs.abs().max(rhs.abs()));
            t.finish(threshold, ResidualMeasure::Absolute)
        })
        .collect())
}
