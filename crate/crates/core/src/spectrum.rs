//! Exact quantization by fixed-point iteration.
//!
//! Within one parity sector the levels λ_k satisfy
//!
//! ```text
//! 2 Σ(λ_k) = k + 1/2 ± κ/2,     Σ(λ) = (1/π) Σ_{k'} arg(λ_{k'} - e^{-iφ} λ)
//! ```
//!
//! where k' runs over the same sector. Iterating "evaluate Σ on the current
//! spectrum, re-solve every level" converges geometrically from the
//! semiclassical trial spectrum.
//!
//! Truncation: labels below the cutoff K are iterated; labels in [K, K_sum)
//! are pinned to their semiclassical values and summed explicitly; labels from
//! K_sum on are also semiclassical and summed in closed form. Since the pinned
//! levels are a pure power law in (k + 1/2), every tail power sum
//! Σ λ_{k'}^{-m} is a Hurwitz zeta value, and expanding each angle in powers of
//! λ/λ_{k'} turns the tail into a rapidly convergent series. When the m = 1
//! sum diverges (μ > 1, i.e. N = 1) the Hurwitz value is its zeta-regularized
//! continuation, which reproduces the counterterm-subtracted limit exactly.
//!
//! The exact levels approach the semiclassical ones as
//! λ_k = λ_k^{(0)} (1 + c/(k + 1/2)^2 + ...). Pinning with c = 0 leaves an error
//! of order K^{-2} in the low levels, so after the first converged pass c is
//! fitted from the iterated levels, the pinned levels are corrected, and the
//! iteration is resumed.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::constants::{dynamical_constants, DynamicalConstants};
use crate::error::{Error, Result};
use crate::numeric::{bracketed_root, KahanSum};
use crate::special::zeta::hurwitz_zeta_scaled;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn offset(self) -> usize {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }

    /// +1 for even, -1 for odd: the sign in front of κ/2 and of Z±(0) = ±1/4.
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }

    pub fn of_label(k: usize) -> Parity {
        if k.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }

    pub fn both() -> [Parity; 2] {
        [Parity::Even, Parity::Odd]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationOptions {
    pub max_sweeps: usize,
    /// K_sum = max(horizon_factor * K, min_horizon)
    pub horizon_factor: usize,
    pub min_horizon: usize,
    /// fit and apply the (k + 1/2)^{-2} correction to the pinned levels
    pub correct_pinned: bool,
}

impl Default for IterationOptions {
    fn default() -> Self {
        Self { max_sweeps: 60, horizon_factor: 8, min_horizon: 512, correct_pinned: true }
    }
}

/// Fewest iterated levels for which the pinned-level correction is fitted.
const MIN_FIT_LEVELS: usize = 24;
const MAX_REFINEMENTS: usize = 3;

/// Largest m in the tail series; the series needs |λ/λ_tail| <= MAX_TAIL_RATIO.
const TAIL_TERMS: usize = 80;
const MAX_TAIL_RATIO: f64 = 0.5;

/// Power sums of the pinned levels beyond the summation horizon.
///
/// With tail index j ≥ 0 the pinned levels are
/// λ_t ((j + a)/a)^{1/μ} (1 + c/(4 (j + a)^2)), λ_t the uncorrected first tail
/// level. To first order in c,
/// λ_t^s Σ_j λ_j^{-s} = ẑ(s/μ) - (s c / 4a²) ẑ(s/μ + 2) with ẑ(p) = a^p ζ(p, a),
/// which stays O(a) however large s gets.
#[derive(Debug, Clone)]
pub struct TailSums {
    pub first_label: usize,
    pub first_level: f64,
    /// Hurwitz parameter a
    pub hurwitz_a: f64,
    /// coefficient c of the (k + 1/2)^{-2} correction
    pub correction: f64,
    mu: f64,
    /// λ_t^m Σ λ^{-m}, m = 1..=TAIL_TERMS
    scaled: Vec<f64>,
}

impl TailSums {
    fn new(
        constants: &DynamicalConstants,
        parity: Parity,
        horizon_count: usize,
        correction: f64,
    ) -> Result<Self> {
        let first_label = 2 * horizon_count + parity.offset();
        let first_level = semiclassical_level(constants, first_label);
        let a = horizon_count as f64 + (parity.offset() as f64 + 0.5) / 2.0;
        let mut tail = Self {
            first_label,
            first_level,
            hurwitz_a: a,
            correction,
            mu: constants.mu,
            scaled: Vec::with_capacity(TAIL_TERMS),
        };
        // Σ = λ/4 is explicit for N = 2 and the m = 1 power sum sits on the pole
        if !constants.is_harmonic() {
            for m in 1..=TAIL_TERMS {
                let v = tail.scaled_sum(m as f64)?;
                tail.scaled.push(v);
            }
        }
        Ok(tail)
    }

    /// λ_t^s Σ_j λ_j^{-s}, zeta-regularized when s ≤ μ.
    pub fn scaled_sum(&self, s: f64) -> Result<f64> {
        let p = s / self.mu;
        let mut v = hurwitz_zeta_scaled(p, self.hurwitz_a)?;
        if self.correction != 0.0 {
            let a = self.hurwitz_a;
            v -= s * self.correction / (4.0 * a * a) * hurwitz_zeta_scaled(p + 2.0, a)?;
        }
        Ok(v)
    }

    /// Regularized Σ_j log λ_j = -d/ds Σ_j λ_j^{-s} at s = 0.
    pub fn regularized_log_sum(&self) -> Result<f64> {
        let a = self.hurwitz_a;
        // λ_j = scale (j + a)^{1/μ} (1 + c/(4 (j + a)^2)), scale = λ_t a^{-1/μ}
        let ln_scale = self.first_level.ln() - a.ln() / self.mu;
        let zeta0 = crate::special::zeta::hurwitz_zeta_at_zero(a);
        let dzeta0 = crate::special::zeta::hurwitz_zeta_deriv_at_zero(a)?;
        let correction = if self.correction != 0.0 {
            self.correction / 4.0 * hurwitz_zeta_scaled(2.0, a)? / (a * a)
        } else {
            0.0
        };
        Ok(ln_scale * zeta0 - dzeta0 / self.mu + correction)
    }

    /// λ_t^m · (tail power sum of order m), m ≥ 1.
    pub fn scaled_power_sum(&self, m: usize) -> f64 {
        self.scaled[m - 1]
    }

    /// Σ_{m ≥ 1} coeff(m) · r^m · T̂_m for a real ratio r = λ/λ_t.
    fn real_series(&self, ratio: f64, coeff: impl Fn(usize) -> f64) -> Result<f64> {
        if ratio.abs() > MAX_TAIL_RATIO {
            return Err(Error::HorizonTooSmall { ratio: ratio.abs() });
        }
        let mut acc = 0.0;
        let mut pow = 1.0;
        for m in 1..=TAIL_TERMS {
            pow *= ratio;
            let term = coeff(m) * pow * self.scaled[m - 1];
            acc += term;
            if pow.abs() * self.scaled[m - 1].abs() < 1e-18 * acc.abs().max(1e-300) {
                break;
            }
        }
        Ok(acc)
    }

    /// Σ_{m ≥ start} coeff(m) · w^m · T̂_m for complex w.
    pub(crate) fn complex_series(
        &self,
        w: num_complex::Complex64,
        start: usize,
        coeff: impl Fn(usize) -> f64,
    ) -> Result<num_complex::Complex64> {
        if w.norm() > MAX_TAIL_RATIO {
            return Err(Error::HorizonTooSmall { ratio: w.norm() });
        }
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        let mut pow = num_complex::Complex64::new(1.0, 0.0);
        for m in 1..=TAIL_TERMS {
            pow *= w;
            if m < start {
                continue;
            }
            let term = pow * (coeff(m) * self.scaled[m - 1]);
            acc += term;
            if term.norm() < 1e-18 * acc.norm().max(1e-300) {
                break;
            }
        }
        Ok(acc)
    }
}

/// A (trial or converged) spectrum of one parity sector.
#[derive(Debug, Clone)]
pub struct ParitySpectrum {
    pub degree: u32,
    pub parity: Parity,
    /// labels < cutoff are iterated, labels >= cutoff pinned semiclassically
    pub cutoff: usize,
    pub tol: f64,
    pub converged: bool,
    constants: DynamicalConstants,
    /// levels for labels parity + 2i, i < horizon_count
    levels: Vec<f64>,
    horizon_count: usize,
    n_iterated: usize,
    tail: TailSums,
}

/// Number of labels of the given parity strictly below `k`.
fn labels_below(k: usize, parity: Parity) -> usize {
    (k + 1 - parity.offset()) / 2
}

impl ParitySpectrum {
    /// The semiclassical trial spectrum, levels (2π(k + 1/2)/b0)^{1/μ}.
    pub fn semiclassical(
        degree: u32,
        parity: Parity,
        cutoff: usize,
        tol: f64,
        options: &IterationOptions,
    ) -> Result<Self> {
        let constants = dynamical_constants(degree)?;
        let horizon = (options.horizon_factor * cutoff).max(options.min_horizon).max(cutoff + 2);
        let horizon_count = labels_below(horizon, parity);
        let levels: Vec<f64> = (0..horizon_count)
            .map(|i| semiclassical_level(&constants, 2 * i + parity.offset()))
            .collect();
        let n_iterated = labels_below(cutoff, parity);
        let tail = TailSums::new(&constants, parity, horizon_count, 0.0)?;
        Ok(Self {
            degree,
            parity,
            cutoff,
            tol,
            converged: false,
            constants,
            levels,
            horizon_count,
            n_iterated,
            tail,
        })
    }

    /// Re-pins every level at or above the cutoff to
    /// λ_k^{(0)} (1 + c/(k + 1/2)^2), keeping the iterated levels.
    pub fn with_pinned_correction(mut self, correction: f64) -> Result<Self> {
        for i in self.n_iterated..self.horizon_count {
            let k = self.label_of_index(i);
            self.levels[i] = pinned_level(&self.constants, k, correction);
        }
        self.tail = TailSums::new(&self.constants, self.parity, self.horizon_count, correction)?;
        Ok(self)
    }

    /// Coefficient c of the pinned-level correction currently in use.
    pub fn pinned_correction(&self) -> f64 {
        self.tail.correction
    }

    /// Mean of (λ_k/λ_k^{(0)} - 1)(k + 1/2)^2 over iterated labels between
    /// K/8 and K/4, where the levels are asymptotic but far from the cutoff.
    pub fn fit_pinned_correction(&self) -> Option<f64> {
        let n = self.n_iterated;
        if n < MIN_FIT_LEVELS {
            return None;
        }
        let (lo, hi) = (n / 8, n / 4);
        let mut acc = KahanSum::new();
        for i in lo..hi {
            let k = self.label_of_index(i);
            let x = k as f64 + 0.5;
            acc.add((self.levels[i] / semiclassical_level(&self.constants, k) - 1.0) * x * x);
        }
        Some(acc.value() / (hi - lo) as f64)
    }

    /// Spectrum with explicitly supplied low levels (labels parity, parity+2, ...);
    /// labels from `2 * low.len() + parity` on are pinned semiclassically.
    pub fn from_levels(
        degree: u32,
        parity: Parity,
        low: &[f64],
        tol: f64,
        options: &IterationOptions,
    ) -> Result<Self> {
        let cutoff = 2 * low.len() + parity.offset();
        let mut spec = Self::semiclassical(degree, parity, cutoff, tol, options)?;
        spec.levels[..low.len()].copy_from_slice(low);
        Ok(spec)
    }

    pub fn constants(&self) -> &DynamicalConstants {
        &self.constants
    }

    pub fn tail(&self) -> &TailSums {
        &self.tail
    }

    /// Converged (or trial) levels for labels below the cutoff.
    pub fn iterated_levels(&self) -> &[f64] {
        &self.levels[..self.n_iterated]
    }

    /// All explicitly summed levels (iterated followed by pinned).
    pub fn horizon_levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn label_of_index(&self, i: usize) -> usize {
        2 * i + self.parity.offset()
    }

    pub fn iterated_labels(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n_iterated).map(|i| self.label_of_index(i))
    }

    fn index_of_label(&self, k: usize) -> Result<usize> {
        if Parity::of_label(k) != self.parity {
            return Err(Error::ParityMismatch { label: k, expected: self.parity.name() });
        }
        Ok(k / 2)
    }

    /// λ_k for any label of this parity; semiclassical beyond the stored horizon.
    pub fn level(&self, k: usize) -> Result<f64> {
        let i = self.index_of_label(k)?;
        Ok(self
            .levels
            .get(i)
            .copied()
            .unwrap_or_else(|| pinned_level(&self.constants, k, self.tail.correction)))
    }

    /// |λ| up to which determinant products are certified: λ at label K/2.
    pub fn validated_radius(&self) -> f64 {
        semiclassical_level(&self.constants, self.cutoff / 2)
    }

    /// Right-hand side t with Σ(λ_k) = t.
    pub fn quantization_target(&self, k: usize) -> f64 {
        (k as f64 + 0.5 + self.parity.sign() * self.constants.kappa / 2.0) / 2.0
    }

    /// max over iterated labels of |2Σ(λ_k) - (k + 1/2 ± κ/2)|.
    pub fn fixed_point_residual(&self) -> Result<f64> {
        let mut worst = 0.0f64;
        for (i, k) in self.iterated_labels().enumerate() {
            let s = sigma(self, self.levels[i])?;
            worst = worst.max((2.0 * s - 2.0 * self.quantization_target(k)).abs());
        }
        Ok(worst)
    }
}

/// Bohr–Sommerfeld level (2π(k + 1/2)/b0)^{1/μ}.
pub fn semiclassical_level(constants: &DynamicalConstants, k: usize) -> f64 {
    (2.0 * PI * (k as f64 + 0.5) / constants.b0).powf(1.0 / constants.mu)
}

/// Semiclassical level with the (k + 1/2)^{-2} correction.
pub fn pinned_level(constants: &DynamicalConstants, k: usize, correction: f64) -> f64 {
    let x = k as f64 + 0.5;
    semiclassical_level(constants, k) * (1.0 + correction / (x * x))
}

/// arg(level - e^{-iφ} λ), principal branch. In [0, π) when sin φ > 0 and
/// in (-π, 0] when sin φ < 0.
pub fn subtended_angle(lambda: f64, level: f64, phi: f64) -> f64 {
    (lambda * phi.sin()).atan2(level - lambda * phi.cos())
}

/// Arg D(-e^{-iφ} λ): angle sum over the explicit levels plus the closed-form
/// (regularized when μ > 1) tail. For N = 2 this is the closed form πλ/4.
pub fn arg_det(spec: &ParitySpectrum, lambda: f64) -> Result<f64> {
    let c = &spec.constants;
    if c.is_harmonic() {
        return Ok(PI * lambda / 4.0);
    }
    if lambda == 0.0 {
        return Ok(0.0);
    }
    let (s, co) = (c.phi.sin(), c.phi.cos());
    let mut acc = KahanSum::new();
    for &x in &spec.levels {
        acc.add((lambda * s).atan2(x - lambda * co));
    }
    let phi = c.phi;
    let tail = spec
        .tail
        .real_series(lambda / spec.tail.first_level, |m| (m as f64 * phi).sin() / m as f64)?;
    acc.add(tail);
    Ok(acc.value())
}

/// Partial angle sum over the first `count` levels of the sector, with the
/// density counterterm subtracted when the angle series diverges (μ > 1):
///
/// Σ_{i<count} φ_i(λ) - λ sin φ · (b0 μ / 4π) λ_count^{μ-1} / (μ - 1).
///
/// Converges to [`arg_det`] as `count` grows; slowly (like count^{-1/3}) for
/// N = 1, so this is a cross-check of the closed-form tail, not a substitute.
pub fn arg_det_partial(spec: &ParitySpectrum, lambda: f64, count: usize) -> Result<f64> {
    let c = &spec.constants;
    let mut acc = KahanSum::new();
    for i in 0..count {
        let x = spec.level(spec.label_of_index(i))?;
        acc.add(subtended_angle(lambda, x, c.phi));
    }
    if c.mu > 1.0 {
        let next = spec.level(spec.label_of_index(count))?;
        let density = c.b0 * c.mu / (4.0 * PI);
        acc.add(-lambda * c.phi.sin() * density * next.powf(c.mu - 1.0) / (c.mu - 1.0));
    }
    Ok(acc.value())
}

/// Σ(λ) = Arg D(-e^{-iφ} λ) / π.
pub fn sigma(spec: &ParitySpectrum, lambda: f64) -> Result<f64> {
    Ok(arg_det(spec, lambda)? / PI)
}

/// dΣ/dλ, analytic.
pub fn sigma_derivative(spec: &ParitySpectrum, lambda: f64) -> Result<f64> {
    let c = &spec.constants;
    if c.is_harmonic() {
        return Ok(0.25);
    }
    let (s, co) = (c.phi.sin(), c.phi.cos());
    let mut acc = KahanSum::new();
    for &x in &spec.levels {
        let re = x - lambda * co;
        acc.add(s * x / (re * re + lambda * lambda * s * s));
    }
    let phi = c.phi;
    let lt = spec.tail.first_level;
    // d/dλ Σ_m sin(mφ)/m (λ/λ_t)^m T̂_m = (1/λ) Σ_m sin(mφ) (λ/λ_t)^m T̂_m
    let tail = if lambda == 0.0 {
        phi.sin() * spec.tail.scaled_power_sum(1) / lt
    } else {
        spec.tail.real_series(lambda / lt, |m| (m as f64 * phi).sin())? / lambda
    };
    acc.add(tail);
    Ok(acc.value() / PI)
}

/// Re-solves the level with label `k` against the spectrum `spec`.
pub fn solve_level(spec: &ParitySpectrum, k: usize) -> Result<f64> {
    let target = {
        spec.index_of_label(k)?;
        spec.quantization_target(k)
    };
    if spec.constants.is_harmonic() {
        return Ok(4.0 * target);
    }
    let f = |x: f64| -> Result<f64> { Ok(sigma(spec, x)? - target) };
    let x0 = spec.level(k)?;
    let (mut lo, mut hi) = (x0, x0);
    let mut f0 = f(x0)?;
    if f0 == 0.0 {
        return Ok(x0);
    }
    let mut steps = 0;
    if f0 < 0.0 {
        while f0 < 0.0 {
            lo = hi;
            hi *= 1.25;
            f0 = f(hi)?;
            steps += 1;
            if steps > 200 {
                return Err(Error::Bracket { label: k, lo: x0, hi });
            }
        }
    } else {
        while f0 > 0.0 {
            hi = lo;
            lo /= 1.25;
            f0 = f(lo)?;
            steps += 1;
            if steps > 200 {
                return Err(Error::Bracket { label: k, lo, hi: x0 });
            }
        }
    }
    // monotonicity on the bracket, checked on a few interior samples
    let mut prev = f(lo)?;
    for j in 1..=3 {
        let x = lo + (hi - lo) * j as f64 / 3.0;
        let v = f(x)?;
        if v < prev {
            return Err(Error::Bracket { label: k, lo, hi });
        }
        prev = v;
    }
    let rel_tol = (spec.tol * 1e-3).max(1e-15);
    Ok(bracketed_root(f, lo, hi, 1e-3, rel_tol, k)?.x)
}

/// Per-sweep convergence record of the fixed-point iteration.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceStats {
    /// sweeps of the first pass, from the semiclassical spectrum
    pub iterations: usize,
    /// max_k |Δλ_k| / λ_k per sweep of the first pass
    pub displacement_norms: Vec<f64>,
    /// signed ratios of successive displacement norms; the sign is that of the
    /// inner product of successive displacement vectors (negative = oscillating)
    pub ratios: Vec<f64>,
    /// geometric contraction estimate (last ratio above the root-finding noise)
    pub contraction_estimate: Option<f64>,
    /// sweeps spent after re-pinning with the fitted correction
    pub refinement_sweeps: usize,
    /// fitted coefficient c of the pinned-level correction (0 when unused)
    pub pinned_correction: f64,
}

impl ConvergenceStats {
    fn new() -> Self {
        Self {
            iterations: 0,
            displacement_norms: Vec::new(),
            ratios: Vec::new(),
            contraction_estimate: None,
            refinement_sweeps: 0,
            pinned_correction: 0.0,
        }
    }
}

/// Sweeps until the relative displacement drops below `spec.tol`; records the
/// displacement history into `stats` when given. Returns the sweep count.
fn run_sweeps(
    spec: &mut ParitySpectrum,
    max_sweeps: usize,
    mut stats: Option<&mut ConvergenceStats>,
) -> Result<usize> {
    let eps = spec.tol;
    let noise_floor = (eps * 1e-3).max(1e-15) * 100.0;
    let mut prev: Option<(Vec<f64>, f64)> = None;
    spec.converged = false;
    for sweep in 1..=max_sweeps {
        let mut next = spec.levels.clone();
        for i in 0..spec.n_iterated {
            next[i] = solve_level(spec, spec.label_of_index(i))?;
        }
        let delta: Vec<f64> =
            (0..spec.n_iterated).map(|i| (next[i] - spec.levels[i]) / next[i]).collect();
        let norm = delta.iter().fold(0.0f64, |m, d| m.max(d.abs()));
        if let Some(st) = stats.as_deref_mut() {
            st.iterations += 1;
            st.displacement_norms.push(norm);
            if let Some((prev_delta, prev_norm)) = &prev {
                if *prev_norm > 0.0 {
                    let dot: f64 = prev_delta.iter().zip(&delta).map(|(a, b)| a * b).sum();
                    let r = dot.signum() * norm / prev_norm;
                    st.ratios.push(r);
                    if sweep >= 3 && norm >= noise_floor {
                        st.contraction_estimate = Some(r);
                    }
                }
            }
        }
        spec.levels = next;
        prev = Some((delta, norm));
        if norm <= eps {
            spec.converged = true;
            return Ok(sweep);
        }
    }
    Ok(max_sweeps)
}

/// Runs the fixed-point iteration from the semiclassical spectrum, then (when
/// enabled) refits the pinned-level correction and resumes until the fitted
/// coefficient settles.
pub fn iterate_spectrum(
    degree: u32,
    parity: Parity,
    cutoff: usize,
    eps: f64,
    options: &IterationOptions,
) -> Result<(ParitySpectrum, ConvergenceStats)> {
    if cutoff < 4 {
        return Err(Error::Domain { what: "cutoff K must be >= 4", value: cutoff as f64 });
    }
    if !(eps > 0.0) {
        return Err(Error::Domain { what: "tolerance eps must be > 0", value: eps });
    }
    let mut spec = ParitySpectrum::semiclassical(degree, parity, cutoff, eps, options)?;
    let mut stats = ConvergenceStats::new();
    if spec.constants.is_harmonic() {
        // Σ = λ/4 is explicit: the levels are 2k + 1 and no iteration is needed
        for i in 0..spec.levels.len() {
            spec.levels[i] = 2.0 * spec.label_of_index(i) as f64 + 1.0;
        }
        spec.converged = true;
        return Ok((spec, stats));
    }

    run_sweeps(&mut spec, options.max_sweeps, Some(&mut stats))?;
    if stats.contraction_estimate.is_none() && stats.iterations >= 3 {
        stats.contraction_estimate = stats.ratios.last().copied();
    }
    if options.correct_pinned && spec.converged {
        for _ in 0..MAX_REFINEMENTS {
            let Some(c) = spec.fit_pinned_correction() else { break };
            let previous = spec.pinned_correction();
            spec = spec.with_pinned_correction(c)?;
            stats.refinement_sweeps += run_sweeps(&mut spec, options.max_sweeps, None)?;
            stats.pinned_correction = c;
            if !spec.converged || (c - previous).abs() <= 1e-3 * c.abs() {
                break;
            }
        }
    }
    Ok((spec, stats))
}
