//! Error type shared by all core modules.

use thiserror::Error;

/// Everything that can go wrong in curve geometry, the flow solver, the
/// curve families and the asymptotic fits.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A curve failed its structural invariants (too few vertices,
    /// repeated consecutive vertices, non-finite coordinates).
    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    /// A polygon segment is shorter than the degeneracy threshold.
    #[error("degenerate segment {index} (length {length:e})")]
    DegenerateSegment { index: usize, length: f64 },

    /// The cyclic linear system is not strictly diagonally dominant.
    #[error("ill-conditioned cyclic system: {0}")]
    IllConditioned(String),

    /// Non-finite values appeared during a computation.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// Two or more self-intersections coincide within the merge distance,
    /// i.e. three branches of the curve pass through one point.
    #[error("triple point near ({x}, {y})")]
    TriplePoint { x: f64, y: f64 },

    /// A polygon expected to be simple intersects itself.
    #[error("non-simple boundary polygon")]
    NonSimpleBoundary,

    /// A bounding box with zero width or height cannot be normalized.
    #[error("degenerate bounding box (width {width:e}, height {height:e})")]
    DegenerateBox { width: f64, height: f64 },

    /// A least-squares fit was asked for on unusable data.
    #[error("fit unreliable: {0}")]
    FitUnreliable(String),

    /// The curve is not a union of two x-monotone graphs.
    #[error("curve is not graph-like: {0}")]
    NotGraphLike(String),

    /// A family parameter is outside its valid range.
    #[error("lambda {lambda} outside valid range {range}")]
    LambdaOutOfRange { lambda: f64, range: &'static str },

    /// A solver or family configuration failed validation.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
