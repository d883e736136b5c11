//! Acceptance criteria, one pass/fail line each. Runs as a plain binary so the
//! lines are printed whether or not they pass.

mod common;

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use common::*;
use exact_wkb::cli::{self, Command, RunConfig};
use exact_wkb::determinant::{asymptotic_check, harmonic_determinant, zeta_prime_zero, zeta_value};
use exact_wkb::identities::{
    airy_dependence_residual, cocycle_polynomial_residual, default_grid, pairing_residual,
    stokes_equation_residual, sum_rule_report, wronskian_all_shifts, IdentityReport, ZetaTable,
};
use exact_wkb::special::{airy_real, gamma, rho};
use exact_wkb::variational::ritz_spectrum;
use exact_wkb::{iterate_spectrum, IterationOptions, Parity};
use num_complex::Complex64;
use proptest::test_runner::{Config, TestRunner};

const CUBIC_TABLE_TOL: f64 = 5e-7;
const CUBIC_TIME_LIMIT: Duration = Duration::from_secs(60);
const RITZ_TOL: f64 = 1e-6;
const CONTRACTION_TOL: f64 = 0.05;
const AIRY_TOL: f64 = 1e-4;
const IDENTITY_TOL: f64 = 1e-5;
const ORACLE_DEPENDENCE_TOL: f64 = 1e-9;
const SUM_RULE_TOL: f64 = 1e-6;
const CLOSED_FORM_TOL: f64 = 1e-5;
const HARMONIC_DET_TOL: f64 = 1e-12;
const HARMONIC_RITZ_TOL: f64 = 1e-10;
const ASYMPTOTIC_TOL: f64 = 0.01;
const PROPERTY_CASES: u32 = 32;

const CUBIC_EVEN: [f64; 5] = [1.0229479, 6.3702932, 12.870297, 20.000879, 27.592421];
const CUBIC_ODD: [f64; 5] = [3.4505627, 9.5220764, 16.369373, 23.745471, 31.530790];

type Verdict = Result<String, String>;

fn check(ok: bool, detail: String) -> Verdict {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn cubic_table() -> Verdict {
    let mut config = RunConfig::new(Command::Spectrum, 3);
    config.levels = 5;
    let start = Instant::now();
    let outcome = cli::run(&config);
    let elapsed = start.elapsed();
    let doc: serde_json::Value = serde_json::from_str(&outcome.document).map_err(|e| e.to_string())?;
    let mut worst: f64 = 0.0;
    for (i, table) in [CUBIC_EVEN, CUBIC_ODD].iter().enumerate() {
        let levels = doc["results"][i]["levels"].as_array().ok_or("missing levels")?;
        if levels.len() != table.len() {
            return Err(format!("expected {} levels, got {}", table.len(), levels.len()));
        }
        for (got, want) in levels.iter().zip(table) {
            worst = worst.max((got.as_f64().unwrap() - want).abs());
        }
    }
    check(
        outcome.exit_code == 0 && worst <= CUBIC_TABLE_TOL && elapsed <= CUBIC_TIME_LIMIT,
        format!("max |Δ| = {worst:.2e} (tol {CUBIC_TABLE_TOL:.0e}), {:.1} s", elapsed.as_secs_f64()),
    )
}

fn ritz_agreement() -> Verdict {
    let s = sectors(3);
    let mut worst: f64 = 0.0;
    for p in Parity::both() {
        let r = ritz_spectrum(3, p, &[20, 30, 40]).map_err(|e| e.to_string())?;
        for (a, b) in r.best().iter().zip(s.sector(p).iterated_levels()).take(6) {
            worst = worst.max((a - b).abs());
        }
    }
    check(worst <= RITZ_TOL, format!("N=3 sizes 20/30/40, lowest 6 per parity: max |Δ| = {worst:.2e} (tol {RITZ_TOL:.0e})"))
}

fn contraction_factors() -> Verdict {
    let expected = [(3, 0.233, 0.189), (4, 0.392, 0.333), (1, -0.37, -0.25)];
    let mut ok = true;
    let mut parts = Vec::new();
    for (n, want_even, want_odd) in expected {
        let s = sectors(n);
        for (stats, want, tag) in [(&s.even_stats, want_even, "+"), (&s.odd_stats, want_odd, "-")] {
            match stats.contraction_estimate {
                Some(got) => {
                    ok &= (got - want).abs() <= CONTRACTION_TOL;
                    parts.push(format!("N={n}{tag} {got:+.3}/{want:+.3}"));
                }
                None => {
                    ok = false;
                    parts.push(format!("N={n}{tag} none"));
                }
            }
        }
    }
    check(ok, format!("{} (tol ±{CONTRACTION_TOL})", parts.join(", ")))
}

fn airy_duality() -> Verdict {
    let s = sectors(1);
    let det = s.det();
    let scale = 2.0 * PI.sqrt();
    let mut worst: f64 = 0.0;
    for i in 0..=60 {
        let x = -3.0 + 0.1 * i as f64;
        let (ai, aip) = airy_real(x).map_err(|e| e.to_string())?;
        let v = det.eval(Complex64::new(x, 0.0)).map_err(|e| e.to_string())?;
        worst = worst.max((v.d_minus - scale * ai).norm()).max((v.d_plus + scale * aip).norm());
    }
    check(worst <= AIRY_TOL, format!("N=1 on [-3, 3]: max |Δ| = {worst:.2e} (tol {AIRY_TOL:.0e})"))
}

fn identity_suite() -> Verdict {
    let mut reports: Vec<(IdentityReport, f64)> = Vec::new();
    let mut add = |rs: Vec<IdentityReport>, tol: f64| reports.extend(rs.into_iter().map(|r| (r, tol)));
    let e = |e: exact_wkb::Error| e.to_string();
    for n in [1, 3, 4] {
        let s = sectors(n);
        let det = s.det();
        let grid = default_grid(&s.even).map_err(e)?;
        add(wronskian_all_shifts(&det, &grid).map_err(e)?, IDENTITY_TOL);
        add(stokes_equation_residual(&det, &grid).map_err(e)?, IDENTITY_TOL);
        if n != 3 {
            add(vec![cocycle_polynomial_residual(&det, &grid).map_err(e)?], IDENTITY_TOL);
        }
        if n == 4 {
            add(pairing_residual(&det, &grid).map_err(e)?, IDENTITY_TOL);
        }
        if n == 1 {
            add(airy_dependence_residual(&grid).map_err(e)?, ORACLE_DEPENDENCE_TOL);
        }
    }
    let failed: Vec<String> = reports
        .iter()
        .filter(|(r, tol)| !(r.passed && r.threshold <= *tol))
        .map(|(r, _)| format!("N={} {} ({:.1e})", r.degree, r.identity_id, r.max_rel_residual))
        .collect();
    let worst = reports.iter().map(|(r, _)| r.max_rel_residual).fold(0.0, f64::max);
    if failed.is_empty() {
        Ok(format!("{} reports, worst relative residual {worst:.2e}", reports.len()))
    } else {
        Err(format!("failed: {}", failed.join(", ")))
    }
}

fn sum_rules() -> Verdict {
    let e = |e: exact_wkb::Error| e.to_string();
    let s1 = sectors(1);
    let s4 = sectors(4);
    let r = rho();
    let mut residuals = vec![
        ("Z+(3)=1".to_string(), zeta_value(&s1.even, 3.0).map_err(e)?.value - 1.0, SUM_RULE_TOL),
        ("Z-(1)=-ρ".to_string(), zeta_value(&s1.odd, 1.0).map_err(e)?.value + r, SUM_RULE_TOL),
        ("Z+(2)=1/ρ".to_string(), zeta_value(&s1.even, 2.0).map_err(e)?.value - 1.0 / r, SUM_RULE_TOL),
        (
            "N=1 Z'(0)=-log(2/√3)".to_string(),
            zeta_prime_zero(&s1.even).map_err(e)? + zeta_prime_zero(&s1.odd).map_err(e)? + (2.0 / 3f64.sqrt()).ln(),
            SUM_RULE_TOL,
        ),
        (
            "N=4 Z'(0)=-log 2".to_string(),
            zeta_prime_zero(&s4.even).map_err(e)? + zeta_prime_zero(&s4.odd).map_err(e)? + 2f64.ln(),
            SUM_RULE_TOL,
        ),
    ];
    for n in [1, 3, 4] {
        let s = sectors(n);
        let table = ZetaTable::from_spectra(&s.even, &s.odd, cli::MAX_ZETA_ORDER).map_err(e)?;
        for rep in sum_rule_report(&table).map_err(e)? {
            if rep.identity_id == "odd_log_det_closed_form" || rep.identity_id == "first_moment_gap_closed_form" {
                let name = if rep.identity_id.starts_with("odd") { "Z-'(0) closed form" } else { "Z+(1)-Z-(1) closed form" };
                let value = if rep.passed { rep.max_abs_residual } else { f64::INFINITY };
                residuals.push((format!("N={n} {name}"), value, CLOSED_FORM_TOL));
            }
        }
    }
    let failed: Vec<String> = residuals
        .iter()
        .filter(|(_, r, tol)| !(r.abs() <= *tol))
        .map(|(name, r, _)| format!("{name} ({r:.1e})"))
        .collect();
    let worst = residuals.iter().map(|(_, r, _)| r.abs()).fold(0.0, f64::max);
    if failed.is_empty() {
        Ok(format!("{} checks, worst |residual| {worst:.2e}", residuals.len()))
    } else {
        Err(format!("failed: {}", failed.join(", ")))
    }
}

fn harmonic_degeneration() -> Verdict {
    let e = |e: exact_wkb::Error| e.to_string();
    let o = IterationOptions::default();
    let sqrt_two_pi = (2.0 * PI).sqrt();
    let want = [
        (Parity::Even, 2f64.sqrt() * sqrt_two_pi / gamma(0.25).map_err(e)?),
        (Parity::Odd, sqrt_two_pi / (2f64.sqrt() * gamma(0.75).map_err(e)?)),
    ];
    let mut det_err: f64 = 0.0;
    let mut ritz_err: f64 = 0.0;
    for (p, w) in want {
        let (spec, _) = iterate_spectrum(2, p, 64, EPS, &o).map_err(e)?;
        let from_zeta = (-zeta_prime_zero(&spec).map_err(e)?).exp();
        let closed = harmonic_determinant(p, Complex64::new(0.0, 0.0));
        det_err = det_err.max(((from_zeta - w) / w).abs()).max(((closed.re - w) / w).abs());
        let r = ritz_spectrum(2, p, &[20, 30, 40]).map_err(e)?;
        for (k, x) in r.best().iter().enumerate() {
            ritz_err = ritz_err.max((x - (4 * k + 2 * p.offset() + 1) as f64).abs());
        }
    }
    check(
        det_err <= HARMONIC_DET_TOL && ritz_err <= HARMONIC_RITZ_TOL,
        format!("exp(-Z'(0)) vs Γ: {det_err:.1e} (tol {HARMONIC_DET_TOL:.0e}); Ritz vs 2k+1: {ritz_err:.1e} (tol {HARMONIC_RITZ_TOL:.0e})"),
    )
}

fn asymptotics() -> Verdict {
    let s = sectors(4);
    let dev = asymptotic_check(&s.even, &s.odd, 50.0).map_err(|e| e.to_string())?;
    check(dev <= ASYMPTOTIC_TOL, format!("N=4 |log D/(a0 λ^(3/4)) - 1| at λ=50: {dev:.2e} (tol {ASYMPTOTIC_TOL})"))
}

fn property_suite() -> Verdict {
    let config = Config { cases: PROPERTY_CASES, failure_persistence: None, ..Config::default() };
    let mut failures = Vec::new();
    let mut run = |name: &str, result: Result<(), String>| {
        if let Err(msg) = result {
            failures.push(format!("{name}: {msg}"));
        }
    };
    let mut runner = TestRunner::new_with_rng(config.clone(), proptest::test_runner::TestRng::deterministic_rng(config.rng_algorithm));
    run(
        "interlacing",
        runner.run(&(degrees(), 0usize..200), |(n, k)| check_interlacing(n, k)).map_err(|e| e.to_string()),
    );
    run(
        "variational monotonicity",
        runner
            .run(&(degrees(), parities(), 10usize..30, 1usize..12), |(n, p, s, x)| check_variational_monotonicity(n, p, s, x))
            .map_err(|e| e.to_string()),
    );
    run(
        "sigma monotonicity",
        runner
            .run(&(degrees(), parities(), 0.0f64..60.0, 0.01f64..5.0), |(n, p, l, d)| check_sigma_monotone(n, p, l, d))
            .map_err(|e| e.to_string()),
    );
    run(
        "shift invariance",
        runner
            .run(&(degrees(), 0i64..5, -4.0f64..8.0, -3.0f64..3.0), |(n, l, re, im)| check_shift_invariance(n, l, re, im))
            .map_err(|e| e.to_string()),
    );
    run(
        "conjugate symmetry",
        runner
            .run(&(degrees(), parities(), -8.0f64..8.0, -8.0f64..8.0), |(n, p, re, im)| check_conjugate_symmetry(n, p, re, im))
            .map_err(|e| e.to_string()),
    );
    if failures.is_empty() {
        Ok(format!("5 properties x {PROPERTY_CASES} cases"))
    } else {
        Err(failures.join("; "))
    }
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 9] = [
        ("cubic table reproduction", cubic_table),
        ("Ritz oracle cross-check", ritz_agreement),
        ("contraction factors", contraction_factors),
        ("Airy duality", airy_duality),
        ("identity suite", identity_suite),
        ("sum rules", sum_rules),
        ("harmonic degeneration", harmonic_degeneration),
        ("asymptotics", asymptotics),
        ("property suite", property_suite),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let (tag, detail) = match f() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("[{tag}] {}. {name}: {detail}", i + 1);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
