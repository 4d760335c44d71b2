use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the set on which the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),
    /// A parameter violates its stated constraints.
    #[error("parameter error: {0}")]
    Parameter(String),
    /// A certified precondition (zero-freeness, factorization, ...) failed.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// The integration contour passes too close to a zero; retry with a perturbed radius.
    #[error("contour radius {radius} passes within {min_modulus:e} of a zero")]
    Contour { radius: f64, min_modulus: f64 },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("singularity: {0}")]
    Singularity(String),
    /// A numerical outcome that a proven statement rules out; indicates a bug or bad input.
    #[error("contradiction: {0}")]
    Contradiction(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("infeasible: {0}")]
    Feasibility(String),
    #[error("certification failed: {0}")]
    Certification(String),
    /// The factored disc still meets the triangular set at the origin.
    #[error("multi-step lift required: {0}")]
    MultiStep(String),
    #[error("unknown tolerance `{0}`")]
    UnknownTolerance(String),
}

pub type Result<T> = std::result::Result<T, Error>;
