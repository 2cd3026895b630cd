use thiserror::Error;

/// Errors produced by the quadrature library.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("singularity xi = {xi} lies outside the open interval ({a}, {b})")]
    SingularityOutsideInterval { xi: f64, a: f64, b: f64 },

    #[error(
        "node layout constraint violated for xi = {xi}, n = {n}: \
         the split parameter nu = {nu} does not satisfy {lower_bound} < nu; \
         increase n so that enough nodes fit between the singularity and the far endpoint"
    )]
    LayoutConstraint {
        xi: f64,
        n: usize,
        nu: usize,
        lower_bound: f64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("enumeration guard: n = {n} exceeds the supported limit {max}")]
    EnumerationGuard { n: usize, max: usize },

    #[error("weight family `{0}` has no closed-form finite-part moments and no moment provider")]
    UnsupportedWeight(String),

    #[error("divided difference undefined: evaluation point coincides with xi = {xi}")]
    NodeAtSingularity { xi: f64 },

    #[error("duplicate interpolation nodes at value {0}")]
    DuplicateNodes(f64),

    #[error("tridiagonal eigenvalue iteration failed to converge")]
    EigenNoConvergence,

    #[error("complex evaluator returned a non-finite value at z = {re} + {im}i")]
    ComplexEvaluation { re: f64, im: f64 },

    #[error("exponential integral has a pole at x = 0")]
    EiPole,

    #[error("no exact reference available: {0}")]
    UnsupportedReference(String),
}

pub type Result<T> = std::result::Result<T, Error>;
