#![allow(dead_code)]

use std::sync::OnceLock;

use exact_wkb::determinant::Determinant;
use exact_wkb::identities::wronskian_residual;
use exact_wkb::spectrum::{sigma, sigma_derivative};
use exact_wkb::variational::ritz_spectrum;
use exact_wkb::{iterate_spectrum, ConvergenceStats, IterationOptions, Parity, ParitySpectrum};
use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub const CUTOFF: usize = 256;
pub const EPS: f64 = 1e-10;

pub struct Sectors {
    pub even: ParitySpectrum,
    pub odd: ParitySpectrum,
    pub even_stats: ConvergenceStats,
    pub odd_stats: ConvergenceStats,
}

impl Sectors {
    pub fn det(&self) -> Determinant<'_> {
        Determinant::new(&self.even, &self.odd).unwrap()
    }

    pub fn sector(&self, p: Parity) -> &ParitySpectrum {
        match p {
            Parity::Even => &self.even,
            Parity::Odd => &self.odd,
        }
    }
}

static CACHE: [OnceLock<Sectors>; 5] = [const { OnceLock::new() }; 5];

/// Both parity spectra at the default cutoff, computed once per process.
pub fn sectors(degree: u32) -> &'static Sectors {
    CACHE[degree as usize].get_or_init(|| {
        let o = IterationOptions::default();
        let (even, even_stats) = iterate_spectrum(degree, Parity::Even, CUTOFF, EPS, &o).unwrap();
        let (odd, odd_stats) = iterate_spectrum(degree, Parity::Odd, CUTOFF, EPS, &o).unwrap();
        Sectors { even, odd, even_stats, odd_stats }
    })
}

pub fn degrees() -> impl Strategy<Value = u32> {
    prop_oneof![Just(1u32), Just(3u32), Just(4u32)]
}

pub fn parities() -> impl Strategy<Value = Parity> {
    prop_oneof![Just(Parity::Even), Just(Parity::Odd)]
}

/// λ_{k} < λ_{k+1} with the two labels in opposite sectors.
pub fn check_interlacing(degree: u32, k: usize) -> Result<(), TestCaseError> {
    let s = sectors(degree);
    let at = |j: usize| s.sector(Parity::of_label(j)).level(j).unwrap();
    let (a, b) = (at(k), at(k + 1));
    prop_assert!(a < b, "N={} λ_{}={} !< λ_{}={}", degree, k, a, k + 1, b);
    Ok(())
}

/// Each Ritz level is non-increasing as the basis grows.
pub fn check_variational_monotonicity(degree: u32, parity: Parity, small: usize, extra: usize) -> Result<(), TestCaseError> {
    let r = ritz_spectrum(degree, parity, &[small, small + extra]).unwrap();
    for (lo, hi) in r.eigenvalues[1].iter().zip(&r.eigenvalues[0]) {
        prop_assert!(*lo <= hi + 1e-10 * hi.abs(), "N={} {:?}: {} > {}", degree, parity, lo, hi);
    }
    Ok(())
}

/// Σ is increasing in λ, with a positive derivative.
pub fn check_sigma_monotone(degree: u32, parity: Parity, lambda: f64, step: f64) -> Result<(), TestCaseError> {
    let spec = sectors(degree).sector(parity);
    let (a, b) = (sigma(spec, lambda).unwrap(), sigma(spec, lambda + step).unwrap());
    prop_assert!(a < b, "N={} {:?}: Σ({})={} !< Σ({})={}", degree, parity, lambda, a, lambda + step, b);
    prop_assert!(sigma_derivative(spec, lambda).unwrap() > 0.0);
    Ok(())
}

/// Shifting the subscript by the symmetry order leaves the residual unchanged.
pub fn check_shift_invariance(degree: u32, shift: i64, re: f64, im: f64) -> Result<(), TestCaseError> {
    let s = sectors(degree);
    let det = s.det();
    let order = det.constants.symmetry_order as i64;
    let grid = [Complex64::new(re, im)];
    let a = wronskian_residual(&det, &grid, shift).unwrap();
    let b = wronskian_residual(&det, &grid, shift + order).unwrap();
    let diff = (a.max_rel_residual - b.max_rel_residual).abs();
    prop_assert!(diff < 1e-9, "N={} ℓ={}: {} vs {}", degree, shift, a.max_rel_residual, b.max_rel_residual);
    Ok(())
}

/// D(z̄) = conj D(z) for each sector.
pub fn check_conjugate_symmetry(degree: u32, parity: Parity, re: f64, im: f64) -> Result<(), TestCaseError> {
    let s = sectors(degree);
    let det = s.det();
    let z = Complex64::new(re, im);
    let sector = det.sector(parity);
    let (a, b) = (sector.eval(z).unwrap(), sector.eval(z.conj()).unwrap());
    prop_assert!((a - b.conj()).norm() <= 1e-12 * a.norm().max(1.0), "N={} {:?} z={}: {} vs {}", degree, parity, z, a, b);
    Ok(())
}
