use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("invalid probability: {0}")]
    InvalidProbability(String),

    #[error("probabilities sum to {sum}, expected 1")]
    Normalization { sum: f64 },

    #[error("distribution has no atoms with positive mass")]
    EmptySupport,

    #[error("exponential overflow: Re z = {0}")]
    Overflow(f64),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("mixture weights do not match: {0}")]
    WeightMismatch(String),

    #[error("collinear support")]
    Collinear,

    #[error("target lies outside the triangle")]
    OutsideHull,

    #[error("target lies on the triangle boundary")]
    OnBoundary,

    #[error("stationary frame undefined: C = 1")]
    DegenerateFrame,

    #[error("finite-difference stencil leaves the triangle")]
    StencilOutsideHull,

    #[error("origin is not in the convex hull of the points")]
    OriginNotInHull,

    #[error("distribution mean is {0}, expected 0")]
    NonZeroMean(f64),

    #[error("quadrature did not converge: error estimate {0:e}")]
    Quadrature(f64),

    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("raster too coarse: {occupied} occupied cells (need at least 8)")]
    TooCoarse { occupied: usize },

    #[error("degenerate point cloud")]
    DegenerateCloud,

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
