//! Crate-wide error type.

/// Errors raised by distribution construction, quadrature, measures and
/// the estimation harnesses.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("degenerate parameter: {0}")]
    DegenerateParameter(String),

    #[error("argument outside the function's domain: {0}")]
    OutOfSupport(String),

    #[error("survival mass underflow at t = {t}")]
    TailUnderflow { t: f64 },

    #[error("moment integral did not stabilize: {0}")]
    NonfiniteMoment(String),

    #[error("quadrature failed to converge: {0}")]
    NonConvergence(String),

    #[error("integrand returned a non-finite value at x = {x}")]
    NonFiniteIntegrand { x: f64 },

    #[error("no closed form for family {0}")]
    UnsupportedFamily(String),

    #[error("invalid discrete model: {0}")]
    InvalidModel(String),

    #[error("degenerate probability: {0}")]
    DegenerateProbability(String),

    #[error("eta construction hit a vanishing density at x = {x}")]
    EtaSingularity { x: f64 },

    #[error("map direction contradicts sampled derivative signs: {0}")]
    BranchMismatch(String),

    #[error("quantile singularity: {0}")]
    QuantileSingularity(String),

    #[error("invalid system structure: {0}")]
    InvalidStructure(String),

    #[error("sample too small: {0}")]
    EmptySample(String),

    #[error("bandwidth must be positive, got {0}")]
    NonPositiveBandwidth(f64),

    #[error("study needs at least one replication or resample")]
    EmptyStudy,

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid data: {0}")]
    Validation(String),
}

impl Error {
    /// Short machine-readable name, used in structured CLI error output.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DegenerateParameter(_) => "DegenerateParameter",
            Error::OutOfSupport(_) => "OutOfSupport",
            Error::TailUnderflow { .. } => "TailUnderflow",
            Error::NonfiniteMoment(_) => "NonfiniteMoment",
            Error::NonConvergence(_) => "NonConvergence",
            Error::NonFiniteIntegrand { .. } => "NonFiniteIntegrand",
            Error::UnsupportedFamily(_) => "UnsupportedFamily",
            Error::InvalidModel(_) => "InvalidModel",
            Error::DegenerateProbability(_) => "DegenerateProbability",
            Error::EtaSingularity { .. } => "EtaSingularity",
            Error::BranchMismatch(_) => "BranchMismatch",
            Error::QuantileSingularity(_) => "QuantileSingularity",
            Error::InvalidStructure(_) => "InvalidStructure",
            Error::EmptySample(_) => "EmptySample",
            Error::NonPositiveBandwidth(_) => "NonPositiveBandwidth",
            Error::EmptyStudy => "EmptyStudy",
            Error::Parse { .. } => "ParseError",
            Error::Validation(_) => "ValidationError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
