use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    Domain(String),
    /// A numerical procedure did not reach its tolerance.
    Numerical { what: &'static str, achieved: f64 },
    /// The requested radius would overflow `f64` in the space-form functions.
    Range { requested: f64, safe_max: f64 },
    /// Invalid domain geometry (self-intersecting polygon, non-positive radius...).
    Geometry(String),
    /// The mesh size cannot resolve a feature of the domain.
    Resolution(String),
    /// Element `triangle` has (near) zero or negative area.
    DegenerateTriangle { triangle: usize, area: f64 },
    /// Sparse or dense factorization met a non-positive pivot.
    Factorization { pivot: usize, value: f64 },
    /// An iteration hit its cap.
    NonConvergence { what: &'static str, iterations: usize, residual: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Numerical { what, achieved } => {
                write!(f, "{what} did not converge (achieved tolerance {achieved:e})")
            }
            Error::Range { requested, safe_max } => {
                write!(f, "radius {requested} is out of range, the safe maximum is {safe_max}")
            }
            Error::Geometry(msg) => write!(f, "geometry error: {msg}"),
            Error::Resolution(msg) => write!(f, "resolution error: {msg}"),
            Error::DegenerateTriangle { triangle, area } => {
                write!(f, "triangle {triangle} is degenerate (signed area {area:e})")
            }
            Error::Factorization { pivot, value } => {
                write!(f, "factorization failed at pivot {pivot} (value {value:e}); check mesh quality")
            }
            Error::NonConvergence { what, iterations, residual } => write!(
                f,
                "{what} did not converge after {iterations} iterations (best residual {residual:e})"
            ),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
