//! Exact spectra of the Schrödinger operators -d²/dq² + |q|^N by exact-WKB
//! fixed-point quantization, their zeta-regularized spectral determinants,
//! and numerical verification of the functional relations and sum rules the
//! determinants satisfy (including the Airy/quartic pairing at N = 1, 4).
//!
//! Module map:
//!
//! * [`constants`]: growth order, symmetry angle and the other N-dependent constants.
//! * [`special`]: gamma, Hurwitz zeta and Airy evaluators.
//! * [`spectrum`]: the fixed-point quantization engine.
//! * [`determinant`]: spectral zeta values, determinants, Stokes multipliers.
//! * [`identities`]: residual checks of functional relations and sum rules.
//! * [`variational`]: Rayleigh–Ritz oracle in the harmonic-oscillator basis.
//! * [`cli`]: report generation behind the `exact-wkb` binary.

pub mod cli;
pub mod constants;
pub mod determinant;
pub mod error;
pub mod identities;
pub mod numeric;
pub mod special;
pub mod spectrum;
pub mod variational;

pub use constants::{duality_check, dynamical_constants, DualityReport, DynamicalConstants};
pub use error::{Error, Result};
pub use spectrum::{iterate_spectrum, ConvergenceStats, IterationOptions, Parity, ParitySpectrum};
