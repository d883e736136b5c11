//! Report generation behind the `exact-wkb` binary.
//!
//! Every command builds one [`Report`] and renders it as JSON (default) or as
//! a CSV table. Exit codes: 0 success, 1 usage error, 2 numerical failure,
//! 3 a verification check failed.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use crate::constants::{dynamical_constants, DynamicalConstants};
use crate::determinant::{zeta_prime_zero, zeta_value, Determinant, SpectralZeta};
use crate::error::{Error, Result};
use crate::identities::{self, IdentityReport, ZetaTable};
use crate::spectrum::{arg_det, iterate_spectrum, subtended_angle, ConvergenceStats, IterationOptions, Parity, ParitySpectrum};
use crate::variational::{ritz_spectrum, RitzResult};

pub const SCHEMA_VERSION: u32 = 1;
pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;

/// Highest integer order reported by `zeta`.
pub const MAX_ZETA_ORDER: u32 = 4;
/// Largest |Ritz - fixed point| accepted by `ritz`.
pub const RITZ_AGREEMENT: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(name = "exact-wkb", version, about = "Exact-WKB spectra and spectral determinants of -d²/dq² + |q|^N")]
struct Cli {
    #[command(subcommand)]
    command: CommandArgs,
}

#[derive(Debug, Subcommand)]
enum CommandArgs {
    /// Eigenvalues and convergence record of the fixed-point iteration
    Spectrum(CommonArgs),
    /// Spectral zeta values Z±(n) and Z±'(0)
    Zeta(CommonArgs),
    /// Residuals of every functional relation and sum rule that applies at this degree
    Verify(CommonArgs),
    /// Rayleigh-Ritz eigenvalues compared with the fixed-point spectrum
    Ritz(CommonArgs),
    /// Per-level angle summands of arg D at one spectral parameter
    Angles(CommonArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ParityArg {
    Even,
    Odd,
}

impl From<ParityArg> for Parity {
    fn from(p: ParityArg) -> Self {
        match p {
            ParityArg::Even => Parity::Even,
            ParityArg::Odd => Parity::Odd,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
struct CommonArgs {
    /// Potential exponent N >= 1
    #[arg(long)]
    degree: u32,
    /// Restrict to one parity sector (default: both)
    #[arg(long, value_enum)]
    parity: Option<ParityArg>,
    /// Levels reported per parity
    #[arg(long, default_value_t = 6)]
    levels: usize,
    /// Fixed-point stopping tolerance (relative)
    #[arg(long, default_value_t = 1e-10)]
    eps: f64,
    /// Highest explicitly iterated label K
    #[arg(long, default_value_t = 256)]
    cutoff: usize,
    /// Sample points for `verify`: "default" or "LO:HI:COUNT" on the real axis
    #[arg(long, default_value = "default")]
    grid: String,
    /// Spectral parameter for `angles`
    #[arg(long, default_value_t = 15.0)]
    lambda: f64,
    /// Comma-separated basis sizes for `ritz`
    #[arg(long, value_delimiter = ',', default_values_t = [20, 30, 40])]
    sizes: Vec<usize>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Spectrum,
    Zeta,
    Verify,
    Ritz,
    Angles,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GridSpec {
    Default,
    Segment { lo: f64, hi: f64, count: usize },
}

impl std::str::FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "default" {
            return Ok(GridSpec::Default);
        }
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || format!("grid must be \"default\" or LO:HI:COUNT, got {s:?}");
        if parts.len() != 3 {
            return Err(bad());
        }
        let lo: f64 = parts[0].parse().map_err(|_| bad())?;
        let hi: f64 = parts[1].parse().map_err(|_| bad())?;
        let count: usize = parts[2].parse().map_err(|_| bad())?;
        if count < 2 || !(hi > lo) {
            return Err(bad());
        }
        Ok(GridSpec::Segment { lo, hi, count })
    }
}

/// A validated command line.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub degree: u32,
    pub parity: Option<Parity>,
    pub levels: usize,
    pub cutoff: usize,
    pub eps: f64,
    pub grid: GridSpec,
    pub lambda: f64,
    pub sizes: Vec<usize>,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: Command, degree: u32) -> Self {
        RunConfig {
            command,
            degree,
            parity: None,
            levels: 6,
            cutoff: 256,
            eps: 1e-10,
            grid: GridSpec::Default,
            lambda: 15.0,
            sizes: vec![20, 30, 40],
            format: OutputFormat::Json,
            out: None,
        }
    }

    fn from_args(command: Command, a: CommonArgs) -> std::result::Result<Self, String> {
        if a.degree < 1 {
            return Err("--degree must be at least 1".into());
        }
        if !(a.eps > 0.0) {
            return Err("--eps must be positive".into());
        }
        if a.cutoff < 4 {
            return Err("--cutoff must be at least 4".into());
        }
        if a.levels == 0 {
            return Err("--levels must be positive".into());
        }
        if !a.lambda.is_finite() {
            return Err("--lambda must be finite".into());
        }
        let grid = a.grid.parse()?;
        if a.sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err("--sizes must be strictly ascending".into());
        }
        Ok(RunConfig {
            command,
            degree: a.degree,
            parity: a.parity.map(Parity::from),
            levels: a.levels,
            cutoff: a.cutoff,
            eps: a.eps,
            grid,
            lambda: a.lambda,
            sizes: a.sizes,
            format: a.format,
            out: a.out,
        })
    }

    fn parities(&self) -> Vec<Parity> {
        match self.parity {
            Some(p) => vec![p],
            None => Parity::both().to_vec(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report<T: Serialize> {
    pub schema_version: u32,
    pub command: Command,
    pub degree: u32,
    pub constants: DynamicalConstants,
    pub results: T,
}

#[derive(Debug, Clone, Serialize)]
pub struct SectorLevels {
    pub parity: Parity,
    pub labels: Vec<usize>,
    pub levels: Vec<f64>,
    pub converged: bool,
    pub stats: ConvergenceStats,
}

#[derive(Debug, Clone, Serialize)]
pub struct SectorZeta {
    pub parity: Parity,
    pub values: Vec<SpectralZeta>,
    pub prime_at_zero: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyResults {
    pub all_passed: bool,
    pub reports: Vec<IdentityReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RitzRow {
    pub parity: Parity,
    pub label: usize,
    pub ritz: f64,
    pub fixed_point: f64,
    pub difference: f64,
    pub agrees: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RitzResults {
    pub tolerance: f64,
    pub sectors: Vec<RitzResult>,
    pub comparison: Vec<RitzRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct AngleRow {
    pub label: usize,
    pub level: f64,
    pub angle: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SectorAngles {
    pub parity: Parity,
    pub lambda: f64,
    pub summands: Vec<AngleRow>,
    /// Arg D(-e^{-iφ}λ) over the whole spectrum, tail included
    pub total: f64,
}

/// Outcome of one run: exit code plus the rendered document.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub exit_code: i32,
    pub document: String,
}

fn spectra(config: &RunConfig, parities: &[Parity]) -> Result<Vec<(ParitySpectrum, ConvergenceStats)>> {
    let options = IterationOptions::default();
    parities.iter().map(|&p| iterate_spectrum(config.degree, p, config.cutoff, config.eps, &options)).collect()
}

fn both_spectra(config: &RunConfig) -> Result<(ParitySpectrum, ParitySpectrum)> {
    let mut v = spectra(config, &Parity::both())?.into_iter().map(|(s, _)| s);
    Ok((v.next().expect("even"), v.next().expect("odd")))
}

fn first_levels(spec: &ParitySpectrum, count: usize) -> (Vec<usize>, Vec<f64>) {
    let labels: Vec<usize> = spec.iterated_labels().take(count).collect();
    let levels = spec.iterated_levels().iter().copied().take(count).collect();
    (labels, levels)
}

/// `Ok(None)` when the identity does not apply at this degree.
fn applicable<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::UnsupportedDegree { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn grid_points(config: &RunConfig, even: &ParitySpectrum) -> Result<Vec<Complex64>> {
    match config.grid {
        GridSpec::Default => identities::default_grid(even),
        GridSpec::Segment { lo, hi, count } => Ok((0..count)
            .map(|i| Complex64::new(lo + (hi - lo) * i as f64 / (count - 1) as f64, 0.0))
            .collect()),
    }
}

fn verify_reports(config: &RunConfig) -> Result<Vec<IdentityReport>> {
    let (even, odd) = both_spectra(config)?;
    let det = Determinant::new(&even, &odd)?;
    let grid = grid_points(config, &even)?;
    let mut reports = Vec::new();
    for rs in [
        applicable(identities::wronskian_all_shifts(&det, &grid))?,
        applicable(identities::linear_system_report(&det, &grid).map(|r| vec![r]))?,
        applicable(identities::pairing_residual(&det, &grid))?,
        applicable(identities::dependence_residual(&det, &grid))?,
        applicable(identities::cocycle_polynomial_residual(&det, &grid).map(|r| vec![r]))?,
        applicable(identities::stokes_equation_residual(&det, &grid))?,
    ]
    .into_iter()
    .flatten()
    {
        reports.extend(rs);
    }
    if config.degree == 1 {
        reports.extend(identities::airy_dependence_residual(&grid)?);
        reports.push(identities::airy_wronskian_residual(&grid)?);
        reports.push(identities::airy_cocycle_residual(&grid)?);
    }
    let table = ZetaTable::from_spectra(&even, &odd, MAX_ZETA_ORDER)?;
    reports.extend(identities::sum_rule_report(&table)?);
    Ok(reports)
}

fn ritz_results(config: &RunConfig) -> Result<RitzResults> {
    let parities = config.parities();
    let fixed = spectra(config, &parities)?;
    let mut sectors = Vec::new();
    let mut comparison = Vec::new();
    for (&parity, (spec, _)) in parities.iter().zip(&fixed) {
        let ritz = ritz_spectrum(config.degree, parity, &config.sizes)?;
        for (i, (&r, &f)) in ritz.best().iter().zip(spec.iterated_levels()).take(config.levels).enumerate() {
            let difference = r - f;
            comparison.push(RitzRow {
                parity,
                label: spec.label_of_index(i),
                ritz: r,
                fixed_point: f,
                difference,
                agrees: difference.abs() <= RITZ_AGREEMENT,
            });
        }
        sectors.push(ritz);
    }
    Ok(RitzResults { tolerance: RITZ_AGREEMENT, sectors, comparison })
}

fn angle_results(config: &RunConfig) -> Result<Vec<SectorAngles>> {
    let parities = config.parities();
    let phi = dynamical_constants(config.degree)?.phi;
    let mut out = Vec::new();
    for (&parity, (spec, _)) in parities.iter().zip(spectra(config, &parities)?) {
        let (labels, levels) = first_levels(&spec, config.levels);
        let summands = labels
            .into_iter()
            .zip(levels)
            .map(|(label, level)| AngleRow { label, level, angle: subtended_angle(config.lambda, level, phi) })
            .collect();
        out.push(SectorAngles { parity, lambda: config.lambda, summands, total: arg_det(&spec, config.lambda)? });
    }
    Ok(out)
}

fn report<T: Serialize>(config: &RunConfig, constants: DynamicalConstants, results: T) -> Report<T> {
    Report { schema_version: SCHEMA_VERSION, command: config.command, degree: config.degree, constants, results }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn to_csv(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

/// Shortest round-trip text, in exponent form for very small or large magnitudes.
fn num(x: f64) -> String {
    if x != 0.0 && x.is_finite() && !(1e-4..1e15).contains(&x.abs()) {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

fn complex_list(points: &[Complex64]) -> String {
    let mut s = String::new();
    for (i, z) in points.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{}{}{}i", num(z.re), if z.im < 0.0 { "-" } else { "+" }, num(z.im.abs()));
    }
    s
}

/// Runs one command and renders its report. Library errors map onto exit
/// codes 1 (unsupported input) and 2 (numerical failure).
pub fn run(config: &RunConfig) -> Outcome {
    match render(config) {
        Ok(o) => o,
        Err(e) => Outcome {
            exit_code: if e.is_numerical() { EXIT_NUMERICAL } else { EXIT_USAGE },
            document: format!("error: {e}\n"),
        },
    }
}

fn render(config: &RunConfig) -> Result<Outcome> {
    let constants = dynamical_constants(config.degree)?;
    let csv = config.format == OutputFormat::Csv;
    let mut exit_code = EXIT_OK;
    let document = match config.command {
        Command::Spectrum => {
            let parities = config.parities();
            let mut sectors = Vec::new();
            for (&parity, (spec, stats)) in parities.iter().zip(spectra(config, &parities)?) {
                let (labels, levels) = first_levels(&spec, config.levels);
                sectors.push(SectorLevels { parity, labels, levels, converged: spec.converged, stats });
            }
            if sectors.iter().any(|s| !s.converged) {
                exit_code = EXIT_NUMERICAL;
            }
            if csv {
                let rows = sectors
                    .iter()
                    .flat_map(|s| {
                        s.labels.iter().zip(&s.levels).map(|(k, x)| vec![s.parity.name().to_string(), k.to_string(), num(*x)])
                    })
                    .collect();
                to_csv(&["parity", "label", "level"], rows)
            } else {
                to_json(&report(config, constants, sectors))
            }
        }
        Command::Zeta => {
            let parities = config.parities();
            let mut sectors = Vec::new();
            for (&parity, (spec, _)) in parities.iter().zip(spectra(config, &parities)?) {
                let mut values = Vec::new();
                for n in 1..=MAX_ZETA_ORDER {
                    match zeta_value(&spec, n as f64) {
                        Ok(z) => values.push(z),
                        Err(Error::Pole { .. }) => {}
                        Err(e) => return Err(e),
                    }
                }
                sectors.push(SectorZeta { parity, values, prime_at_zero: zeta_prime_zero(&spec)? });
            }
            if csv {
                let mut rows = Vec::new();
                for s in &sectors {
                    let sign = if s.parity == Parity::Even { "+" } else { "-" };
                    for z in &s.values {
                        rows.push(vec![format!("Z{sign}({})", z.s), num(z.value)]);
                    }
                    rows.push(vec![format!("Z{sign}'(0)"), num(s.prime_at_zero)]);
                }
                to_csv(&["quantity", "value"], rows)
            } else {
                to_json(&report(config, constants, sectors))
            }
        }
        Command::Verify => {
            let reports = verify_reports(config)?;
            let all_passed = reports.iter().all(|r| r.passed);
            if !all_passed {
                exit_code = EXIT_CHECK_FAILED;
            }
            if csv {
                let rows = reports
                    .iter()
                    .map(|r| {
                        vec![
                            r.identity_id.clone(),
                            num(r.max_abs_residual),
                            num(r.max_rel_residual),
                            num(r.threshold),
                            r.passed.to_string(),
                            complex_list(&r.skipped),
                        ]
                    })
                    .collect();
                to_csv(&["identity_id", "max_abs_residual", "max_rel_residual", "threshold", "passed", "skipped"], rows)
            } else {
                to_json(&report(config, constants, VerifyResults { all_passed, reports }))
            }
        }
        Command::Ritz => {
            let results = ritz_results(config)?;
            if results.comparison.iter().any(|r| !r.agrees) {
                exit_code = EXIT_CHECK_FAILED;
            }
            if csv {
                let rows = results
                    .comparison
                    .iter()
                    .map(|r| {
                        vec![
                            r.parity.name().to_string(),
                            r.label.to_string(),
                            num(r.ritz),
                            num(r.fixed_point),
                            num(r.difference),
                            r.agrees.to_string(),
                        ]
                    })
                    .collect();
                to_csv(&["parity", "label", "ritz", "fixed_point", "difference", "agrees"], rows)
            } else {
                to_json(&report(config, constants, results))
            }
        }
        Command::Angles => {
            let sectors = angle_results(config)?;
            if csv {
                let rows = sectors
                    .iter()
                    .flat_map(|s| {
                        s.summands.iter().map(|a| {
                            vec![s.parity.name().to_string(), a.label.to_string(), num(a.level), num(a.angle)]
                        })
                    })
                    .collect();
                to_csv(&["parity", "label", "level", "angle"], rows)
            } else {
                to_json(&report(config, constants, sectors))
            }
        }
    };
    Ok(Outcome { exit_code, document })
}

/// Parses `args` (program name first), runs, writes the report, and returns
/// the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let (command, common) = match cli.command {
        CommandArgs::Spectrum(a) => (Command::Spectrum, a),
        CommandArgs::Zeta(a) => (Command::Zeta, a),
        CommandArgs::Verify(a) => (Command::Verify, a),
        CommandArgs::Ritz(a) => (Command::Ritz, a),
        CommandArgs::Angles(a) => (Command::Angles, a),
    };
    let config = match RunConfig::from_args(command, common) {
        Ok(c) => c,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
    };
    let outcome = run(&config);
    if outcome.document.starts_with("error: ") {
        eprint!("{}", outcome.document);
        return outcome.exit_code;
    }
    match &config.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &outcome.document) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_USAGE;
            }
        }
        None => print!("{}", outcome.document),
    }
    outcome.exit_code
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_spec_parsing() {
        assert_eq!("default".parse::<GridSpec>().unwrap(), GridSpec::Default);
        assert_eq!("-3:3:61".parse::<GridSpec>().unwrap(), GridSpec::Segment { lo: -3.0, hi: 3.0, count: 61 });
        assert!("3:-3:10".parse::<GridSpec>().is_err());
        assert!("1:2".parse::<GridSpec>().is_err());
        assert!("0:1:1".parse::<GridSpec>().is_err());
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(main_with_args(["exact-wkb", "spectrum", "--degree", "0"]), EXIT_USAGE);
        assert_eq!(main_with_args(["exact-wkb", "spectrum", "--degree", "3", "--eps", "-1"]), EXIT_USAGE);
        assert_eq!(main_with_args(["exact-wkb", "spectrum", "--degree", "3", "--cutoff", "3"]), EXIT_USAGE);
        assert_eq!(main_with_args(["exact-wkb", "ritz", "--degree", "3", "--sizes", "30,20"]), EXIT_USAGE);
    }

    #[test]
    fn harmonic_spectrum_report() {
        let mut config = RunConfig::new(Command::Spectrum, 2);
        config.levels = 3;
        config.cutoff = 32;
        let out = run(&config);
        assert_eq!(out.exit_code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&out.document).unwrap();
        for key in ["schema_version", "command", "degree", "constants", "results"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        let even = v["results"][0]["levels"].as_array().unwrap();
        assert!((even[1].as_f64().unwrap() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let mut config = RunConfig::new(Command::Spectrum, 2);
        config.parity = Some(Parity::Odd);
        config.levels = 2;
        config.cutoff = 32;
        config.format = OutputFormat::Csv;
        let out = run(&config);
        let lines: Vec<&str> = out.document.lines().collect();
        assert_eq!(lines[0], "parity,label,level");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("odd,1,3"));
    }
}
