use core::fmt;

use crate::condition_z::ClosedPath;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Errors produced by the core crate.
///
/// Real values are carried as `f64` approximations so the error type stays
/// independent of the numeric mode.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument fell outside the domain of the function being evaluated.
    Domain { what: &'static str, value: f64 },
    /// A consecutive gap between sorted transfer values fell inside the band
    /// `(tolerance, 10 * tolerance)`, so grouping cannot be trusted.
    GroupingAmbiguity { block: usize, gap: f64, tolerance: f64 },
    /// The sample contains a closed path; no outer functions exist for a
    /// generic target.
    Unrepresentable(ClosedPath),
    /// The supplied coefficients do not cancel in every block.
    InvalidWitness,
    /// An input exceeded a size limit of an exhaustive routine.
    Size { n: usize, max: usize },
    /// Dimensions of two inputs disagree.
    DimensionMismatch { expected: usize, found: usize },
    /// A configuration value violates a structural invariant.
    Invalid(&'static str),
    /// The requested inner function cannot be evaluated in exact arithmetic.
    FloatOnly,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, value } => write!(f, "{what} out of domain: {value}"),
            Error::GroupingAmbiguity { block, gap, tolerance } => {
                write!(f, "ambiguous grouping in block {block}: gap {gap:e} is within 10x of tolerance {tolerance:e}")
            }
            Error::Unrepresentable(path) => {
                write!(f, "unrepresentable: closed path on {} points", path.points.len())
            }
            Error::InvalidWitness => f.write_str("coefficients do not annihilate every block"),
            Error::Size { n, max } => write!(f, "size {n} exceeds limit {max}"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::Invalid(msg) => f.write_str(msg),
            Error::FloatOnly => f.write_str("inner function is only available in float mode"),
        }
    }
}

impl core::error::Error for Error {}
