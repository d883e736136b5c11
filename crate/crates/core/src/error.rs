use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {what} (got {value})")]
    Domain { what: &'static str, value: f64 },

    #[error("argument |z| = {modulus} outside the working range |z| <= {limit}")]
    OutOfRange { modulus: f64, limit: f64 },

    #[error("degree N = {degree} has no integer dual (N * N' = 4 has no integer solution)")]
    NoIntegerDual { degree: u32 },

    #[error("degree N = {degree} is not supported by {operation}")]
    UnsupportedDegree { degree: u32, operation: &'static str },

    #[error("root bracket failure for label {label}: no monotone sign change on [{lo}, {hi}]")]
    Bracket { label: usize, lo: f64, hi: f64 },

    #[error("root search for label {label} did not converge after {iterations} iterations")]
    RootNoConvergence { label: usize, iterations: usize },

    #[error("summation horizon too small: |lambda| / first tail level = {ratio:.3}")]
    HorizonTooSmall { ratio: f64 },

    #[error("zeta function pole at s = {s}")]
    Pole { s: f64 },

    #[error("|lambda| = {modulus} outside the validated radius {radius}")]
    Radius { modulus: f64, radius: f64 },

    #[error("missing input values: {}", .0.join(", "))]
    MissingInput(Vec<String>),

    #[error("parity mismatch: label {label} does not belong to the {expected} sector")]
    ParityMismatch { label: usize, expected: &'static str },

    #[error("symmetric eigensolver did not converge within {sweeps} sweeps")]
    EigenNoConvergence { sweeps: usize },

    #[error("matrix element overflow guard: n' + n'' = {sum} exceeds {limit}")]
    ElementOverflow { sum: usize, limit: usize },
}

impl Error {
    /// True for failures of the numerical machinery (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Bracket { .. }
                | Error::RootNoConvergence { .. }
                | Error::HorizonTooSmall { .. }
                | Error::Radius { .. }
                | Error::EigenNoConvergence { .. }
                | Error::ElementOverflow { .. }
                | Error::Pole { .. }
        )
    }
}
