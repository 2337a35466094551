use thiserror::Error;

/// Errors raised by the model constructors and numerical kernels.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("action weights {weights:?} have gcd {gcd}; the circle action is not effective")]
    NonEffectiveAction { weights: Vec<u32>, gcd: u32 },

    #[error("point is not on the manifold: {0}")]
    PointOffManifold(String),

    #[error("degenerate frame at point: smallest singular value {0:e}")]
    DegenerateFrame(f64),

    #[error("anchor is not a designated chart anchor: {0}")]
    UndesignatedAnchor(String),

    #[error("extremal form exists only on X(q): signature {signature} != q = {q}")]
    SignatureMismatch { signature: usize, q: usize },

    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("quadrature did not converge: relative change {0:e}")]
    QuadratureNonconvergence(f64),

    #[error("ill-conditioned Gram matrix (condition {0:e}); increase quadrature or shrink degree")]
    IllConditioned(f64),

    #[error("chart radius exceeded: log(m)/sqrt(m) = {needed} > {available}")]
    ChartRadiusExceeded { needed: f64, available: f64 },

    #[error("test form support radius {support} exceeds the scaled chart radius {radius}")]
    TestFormSupport { support: f64, radius: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("fit error: {0}")]
    Fit(String),

    #[error("root finding failed: {0}")]
    RootFinding(String),
}

pub type Result<T> = std::result::Result<T, Error>;
