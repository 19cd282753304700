use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;

/// Errors raised by the solver pipeline.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument outside the domain of a function (non-finite input, radius out of range, ...).
    Domain(&'static str),
    /// The inner disc is not strictly inside the unit disc, or a radius/offset is invalid.
    Geometry { a: f64, h: f64 },
    /// Mesh resolution outside the supported range.
    Resolution(&'static str),
    /// A triangle with (near) zero or negative area.
    DegenerateTriangle {
        triangle: usize,
        nodes: [usize; 3],
        area: f64,
    },
    /// A ring node that belongs to no triangle.
    MeshIntegrity { node: usize },
    /// No sign change of the cross-product before the scan ceiling.
    NoBracket { b: f64 },
    /// A non-positive pivot during Cholesky factorization.
    NotPositiveDefinite { pivot: usize },
    /// Matrix dimensions do not agree.
    DimensionMismatch { expected: usize, found: usize },
    /// Inverse iteration did not reach the requested tolerance.
    NoConvergence(Box<ConvergenceFailure>),
}

/// State of the eigen-iteration when it gave up.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceFailure {
    pub iterations: usize,
    pub lambda: f64,
    pub residual: f64,
    pub vector: Vec<f64>,
}

pub type Result<T> = core::result::Result<T, Error>;

impl Error {
    /// True for errors caused by caller input rather than numerical failure.
    pub fn is_invalid_input(&self) -> bool {
        matches!(
            self,
            Error::Domain(_) | Error::Geometry { .. } | Error::Resolution(_)
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => f.write_str(msg),
            Error::Resolution(msg) => f.write_str(msg),
            Error::Geometry { a, h } => write!(
                f,
                "geometry error: need 0 < a < 1, h >= 0 and a + h < 1 (got a = {a}, h = {h})"
            ),
            Error::DegenerateTriangle {
                triangle,
                nodes,
                area,
            } => write!(
                f,
                "degenerate triangle {triangle} with nodes {nodes:?} (signed area {area:e})"
            ),
            Error::MeshIntegrity { node } => {
                write!(f, "boundary node {node} has no adjacent triangle")
            }
            Error::NoBracket { b } => write!(
                f,
                "no sign change of the cross-product found below the scan ceiling for b = {b}"
            ),
            Error::NotPositiveDefinite { pivot } => {
                write!(f, "matrix is not positive definite (pivot {pivot})")
            }
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::NoConvergence(fail) => write!(
                f,
                "eigen-iteration did not converge after {} iterations (lambda = {}, residual = {:e})",
                fail.iterations, fail.lambda, fail.residual
            ),
        }
    }
}

impl core::error::Error for Error {}
