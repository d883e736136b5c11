//! Rayleigh–Ritz oracle: `-d²/dq² + |q|^N` diagonalized in a truncated
//! harmonic-oscillator basis, one parity sector at a time.
//!
//! The matrix elements ⟨n'| |q|^N |n''⟩ are alternating sums whose terms
//! outgrow the result by many orders of magnitude once n' + n'' passes a few
//! dozen, so they are evaluated in exact integer arithmetic and rounded once.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::KahanSum;
use crate::special::ln_gamma;
use crate::spectrum::Parity;

/// Largest n' + n'' accepted by [`matrix_element_qn`]. Enough for basis
/// size 80 in either parity sector.
pub const MAX_INDEX_SUM: usize = 320;
pub const MIN_BASIS: usize = 10;
pub const MAX_BASIS: usize = 80;
const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_REL_TOL: f64 = 1e-15;

fn factorial(n: usize) -> BigUint {
    (1..=n as u64).fold(BigUint::one(), |acc, k| acc * k)
}

/// `(2n)! / n!`
fn double_over_single(n: usize) -> BigUint {
    ((n as u64 + 1)..=(2 * n as u64)).fold(BigUint::one(), |acc, k| acc * k)
}

/// Integer coefficients a!/(m!(a-2m)!) of the Hermite polynomial expansion.
fn hermite_weights(a: usize) -> Vec<BigUint> {
    let fa = factorial(a);
    (0..=a / 2).map(|m| &fa / (factorial(m) * factorial(a - 2 * m))).collect()
}

/// `num / den` rounded to f64, with no intermediate overflow or underflow.
fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let shift = den.bits() as i64 - num.bits() as i64 + 64;
    let q = if shift >= 0 { (num << shift as usize) / den } else { num / (den << (-shift) as usize) };
    let mut x = q.to_f64().unwrap_or(f64::INFINITY);
    let mut e = -shift;
    while e != 0 {
        let step = e.clamp(-500, 500);
        x *= 2f64.powi(step as i32);
        e -= step;
    }
    x
}

/// ⟨n'| |q|^N |n''⟩ for normalized Hermite functions, exact up to the final
/// rounding. Zero when n' + n'' is odd.
pub fn matrix_element_qn(degree: u32, n1: usize, n2: usize) -> Result<f64> {
    if n1 + n2 > MAX_INDEX_SUM {
        return Err(Error::ElementOverflow { sum: n1 + n2, limit: MAX_INDEX_SUM });
    }
    if (n1 + n2) % 2 == 1 {
        return Ok(0.0);
    }
    let w1 = hermite_weights(n1);
    let w2 = hermite_weights(n2);
    let m_max = w1.len() + w2.len() - 2;
    let mut conv = vec![BigUint::zero(); m_max + 1];
    for (i, a) in w1.iter().enumerate() {
        for (j, b) in w2.iter().enumerate() {
            conv[i + j] += a * b;
        }
    }
    let twice_h = 1 + degree as usize + n1 + n2;
    // value² = 2^{n'+n''} T² / (n'! n''! 4^{2e} π^{[h integer]})
    let (total, four_power, with_pi) = if twice_h.is_multiple_of(2) {
        let h = twice_h / 2;
        let mut t = BigInt::zero();
        for (m, c) in conv.iter().enumerate() {
            let term = BigInt::from_biguint(Sign::Plus, factorial(h - m - 1) * c) << (2 * (m_max - m));
            if m % 2 == 0 { t += term } else { t -= term }
        }
        (t, m_max, true)
    } else {
        // Γ(n + ½) = √π (2n)! / (4^n n!), n = n0 - m
        let n0 = (twice_h - 1) / 2;
        let mut t = BigInt::zero();
        for (m, c) in conv.iter().enumerate() {
            let term = BigInt::from_biguint(Sign::Plus, double_over_single(n0 - m) * c);
            if m % 2 == 0 { t += term } else { t -= term }
        }
        (t, n0, false)
    };
    let sign = if total.is_negative() { -1.0 } else { 1.0 };
    let mag = total.magnitude();
    let num = (mag * mag) << (n1 + n2);
    let den = (factorial(n1) * factorial(n2)) << (4 * four_power);
    let mut sq = ratio_to_f64(&num, &den);
    if with_pi {
        sq /= std::f64::consts::PI;
    }
    Ok(sign * sq.sqrt())
}

/// Floating-point evaluation of the same element: each term in log space,
/// Neumaier-summed. Kept to show how much the exact path buys.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ElementCondition {
    pub exact: f64,
    pub log_space: f64,
    /// Σ|terms| / |Σ terms|
    pub condition_number: f64,
    pub relative_error: f64,
}

pub fn matrix_element_condition(degree: u32, n1: usize, n2: usize) -> Result<ElementCondition> {
    let exact = matrix_element_qn(degree, n1, n2)?;
    let h = 0.5 * (1 + degree as usize + n1 + n2) as f64;
    let ln_fact = |k: usize| ln_gamma(k as f64 + 1.0);
    let prefactor = 0.5 * ((n1 + n2) as f64 * 2f64.ln() + ln_fact(n1)? + ln_fact(n2)? - std::f64::consts::PI.ln());
    let mut acc = KahanSum::new();
    let mut magnitude = KahanSum::new();
    for m1 in 0..=n1 / 2 {
        for m2 in 0..=n2 / 2 {
            let m = m1 + m2;
            let ln_term = prefactor - m as f64 * 4f64.ln() + ln_gamma(h - m as f64)?
                - ln_fact(m1)?
                - ln_fact(m2)?
                - ln_fact(n1 - 2 * m1)?
                - ln_fact(n2 - 2 * m2)?;
            let term = ln_term.exp();
            acc.add(if m % 2 == 0 { term } else { -term });
            magnitude.add(term);
        }
    }
    let log_space = if (n1 + n2) % 2 == 1 { 0.0 } else { acc.value() };
    let condition_number = if exact == 0.0 { f64::INFINITY } else { magnitude.value() / exact.abs() };
    let relative_error = if exact == 0.0 { log_space.abs() } else { ((log_space - exact) / exact).abs() };
    Ok(ElementCondition { exact, log_space, condition_number, relative_error })
}

/// Labels n = 2i + p, i < size, of one parity sector.
pub fn basis_labels(parity: Parity, size: usize) -> Vec<usize> {
    (0..size).map(|i| 2 * i + parity.offset()).collect()
}

/// Symmetric matrix `diag(2n+1) - ⟨q²⟩ + ⟨|q|^N⟩` in row-major order.
pub fn build_hamiltonian(degree: u32, parity: Parity, size: usize) -> Result<Vec<Vec<f64>>> {
    if !(MIN_BASIS..=MAX_BASIS).contains(&size) {
        return Err(Error::OutOfRange { modulus: size as f64, limit: MAX_BASIS as f64 });
    }
    let labels = basis_labels(parity, size);
    let mut h = vec![vec![0.0; size]; size];
    for i in 0..size {
        for j in i..size {
            let (a, b) = (labels[i], labels[j]);
            let mut v = matrix_element_qn(degree, a, b)? - matrix_element_qn(2, a, b)?;
            if i == j {
                v += (2 * a + 1) as f64;
            }
            h[i][j] = v;
            h[j][i] = v;
        }
    }
    Ok(h)
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations,
/// ascending.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Result<Vec<f64>> {
    let n = a.len();
    let frobenius: f64 = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum::<f64>().sqrt();
        if off <= JACOBI_REL_TOL * frobenius {
            let mut eig: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
            eig.sort_by(f64::total_cmp);
            return Ok(eig);
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    Err(Error::EigenNoConvergence { sweeps: JACOBI_MAX_SWEEPS })
}

#[derive(Debug, Clone, Serialize)]
pub struct RitzResult {
    pub degree: u32,
    pub parity: Parity,
    pub basis_sizes: Vec<usize>,
    /// One ascending eigenvalue list per basis size.
    pub eigenvalues: Vec<Vec<f64>>,
    /// Digits shared by the two largest bases, per level of the smaller one.
    pub stable_digits: Vec<f64>,
}

impl RitzResult {
    /// Eigenvalues from the largest basis.
    pub fn best(&self) -> &[f64] {
        self.eigenvalues.last().map(Vec::as_slice).unwrap_or(&[])
    }
}

pub fn ritz_spectrum(degree: u32, parity: Parity, sizes: &[usize]) -> Result<RitzResult> {
    let mut basis_sizes = sizes.to_vec();
    basis_sizes.sort_unstable();
    basis_sizes.dedup();
    let eigenvalues = basis_sizes
        .iter()
        .map(|&s| build_hamiltonian(degree, parity, s).and_then(jacobi_eigenvalues))
        .collect::<Result<Vec<_>>>()?;
    let stable_digits = match eigenvalues.len() {
        0 | 1 => Vec::new(),
        n => {
            let (prev, last) = (&eigenvalues[n - 2], &eigenvalues[n - 1]);
            prev.iter()
                .zip(last)
                .map(|(a, b)| {
                    let rel = ((a - b) / b).abs();
                    if rel == 0.0 { 16.0 } else { (-rel.log10()).clamp(0.0, 16.0) }
                })
                .collect()
        }
    };
    Ok(RitzResult { degree, parity, basis_sizes, eigenvalues, stable_digits })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{airy_zero, AiryKind};

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn elements_match_reference_table() {
        // 400-digit reference values
        let table = [
            (2, 0, 0, 0.5),
            (1, 0, 0, 0.564_189_583_547_756_3),
            (3, 1, 1, 2.256_758_334_191_025),
            (2, 0, 2, std::f64::consts::FRAC_1_SQRT_2),
            (3, 10, 10, 40.866_279_092_679_86),
            (3, 20, 22, 71.773_883_735_348_02),
            (3, 40, 40, 309.409_002_438_665_1),
            (3, 0, 40, 4.153_153_579_630_976_5e-4),
            (4, 40, 40, 2460.75),
            (1, 39, 41, 1.909_641_026_643_035_6),
            (3, 78, 80, 510.531_937_709_166_5),
            (5, 7, 3, 30.951_560_143_407_98),
            (3, 158, 158, 2395.404_371_103_305_4),
        ];
        for &(n, a, b, want) in &table {
            let got = matrix_element_qn(n, a, b).unwrap();
            assert!(rel(got, want) < 1e-14, "N={n} ({a},{b}): {got} vs {want}");
        }
    }

    #[test]
    fn parity_selection_and_symmetry() {
        assert_eq!(matrix_element_qn(3, 2, 5).unwrap(), 0.0);
        assert_eq!(matrix_element_qn(3, 12, 30).unwrap(), matrix_element_qn(3, 30, 12).unwrap());
        assert!(matches!(matrix_element_qn(3, 200, 122), Err(Error::ElementOverflow { .. })));
    }

    #[test]
    fn log_space_sum_loses_digits_with_cancellation() {
        let small = matrix_element_condition(3, 4, 6).unwrap();
        assert!(small.relative_error < 1e-12);
        let large = matrix_element_condition(3, 40, 40).unwrap();
        assert!(large.condition_number > 1e10);
        assert!(large.relative_error > small.relative_error);
    }

    #[test]
    fn harmonic_basis_is_exact_for_quadratic() {
        for parity in Parity::both() {
            let r = ritz_spectrum(2, parity, &[10, 20]).unwrap();
            for (k, e) in r.best().iter().enumerate() {
                let want = (4 * k + 2 * parity.offset() + 1) as f64;
                assert!((e - want).abs() < 1e-10, "{e} vs {want}");
            }
        }
    }

    #[test]
    fn quartic_ground_state_converges() {
        let r = ritz_spectrum(4, Parity::Even, &[20, 40]).unwrap();
        assert!((r.best()[0] - 1.060_362_090_484_182_9).abs() < 1e-10);
        assert!(r.stable_digits[0] > 9.0);
    }

    #[test]
    fn cubic_and_linear_ground_states() {
        let h = build_hamiltonian(3, Parity::Even, 30).unwrap();
        for i in 0..30 {
            for j in 0..30 {
                assert!((h[i][j] - h[j][i]).abs() <= 1e-12);
            }
        }
        let e = jacobi_eigenvalues(h).unwrap();
        assert!((e[0] - 1.022_947_876_010).abs() < 1e-8);
        // first zero of Ai, as a magnitude; the kink of |q| at the origin slows convergence
        let r = ritz_spectrum(1, Parity::Odd, &[30, 40]).unwrap();
        let want = airy_zero(AiryKind::Ai, 1).unwrap();
        assert!((r.best()[0] - want).abs() < 1e-7, "{} vs {want}", r.best()[0]);
    }

    #[test]
    fn jacobi_small_matrix() {
        let m = vec![vec![2.0, 1.0, 0.0], vec![1.0, 2.0, 1.0], vec![0.0, 1.0, 2.0]];
        let e = jacobi_eigenvalues(m).unwrap();
        let s = 2f64.sqrt();
        for (g, w) in e.iter().zip([2.0 - s, 2.0, 2.0 + s]) {
            assert!((g - w).abs() < 1e-14);
        }
    }

    #[test]
    fn basis_size_is_bounded() {
        assert!(build_hamiltonian(3, Parity::Even, 5).is_err());
        assert!(build_hamiltonian(3, Parity::Even, 81).is_err());
    }
}
