use thiserror::Error;

/// Errors raised by the numerical engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("no vector passes the kernel residual test")]
    NoKernel,
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("weight exponents must exceed -1 (got {a_exp}, {b_exp})")]
    BadWeight { a_exp: String, b_exp: String },
    #[error("evaluation point {point} lies on the support [{alpha}, {beta}]")]
    PoleOnSupport {
        point: String,
        alpha: String,
        beta: String,
    },
    #[error("total mass is zero")]
    ZeroMass,
    #[error("intervals {0} and {1} overlap")]
    OverlappingIntervals(usize, usize),
    #[error("intervals {0} and {1} touch but touching is not enabled")]
    TouchingNotEnabled(usize, usize),
    #[error("pole {pole} of r_{index} lies in the forbidden region {region}")]
    PoleInForbiddenRegion {
        index: usize,
        pole: String,
        region: String,
    },
    #[error("r_{0} and r_{1} share the pole {2}")]
    SharedPoles(usize, usize, String),
    #[error("infeasible degrees: {0}")]
    InfeasibleDegrees(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
