use thiserror::Error;

/// Errors raised by body construction, curvature evaluation and the
/// affine-surface-area pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AsaError {
    #[error("invalid body: {0}")]
    InvalidBody(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is singular or not invertible")]
    SingularMatrix,

    #[error("direction is not a regular normal: it exposes a face of dimension >= 1")]
    NonRegularNormal,

    #[error("point is not a regular boundary point")]
    NonRegularPoint,

    #[error("point does not lie on the boundary (residual {residual:e})")]
    NotOnBoundary { residual: f64 },

    #[error("operation requires a smooth body")]
    NotSmooth,

    #[error("support-function Hessian unavailable: {0}")]
    HessianUnavailable(String),

    #[error("curvature function vanishes at the normal; Gauss curvature undefined")]
    ZeroCurvatureFunction,

    #[error("curvature function is not finite at a quadrature node")]
    DegenerateCurvature,

    #[error("origin is not in the interior (support value {support:e})")]
    OriginNotInterior { support: f64 },

    #[error("point {0} is not a vertex of the polytope")]
    NotAVertex(usize),

    #[error("facet structure unavailable for dimension {0}")]
    FacetsUnavailable(usize),

    #[error("convex hull unavailable for dimension {0}")]
    HullUnavailable(usize),

    #[error("exponent p must be a positive real number, got {0}")]
    InvalidExponent(f64),

    #[error("function values must be strictly positive and finite")]
    NonPositiveFunction,

    #[error("optimizer did not reach relative descent {tolerance:e} within {iterations} iterations (best {best})")]
    NonConvergence {
        iterations: usize,
        tolerance: f64,
        best: f64,
    },

    #[error("body spec: {0}")]
    Spec(String),
}

pub type Result<T> = std::result::Result<T, AsaError>;
