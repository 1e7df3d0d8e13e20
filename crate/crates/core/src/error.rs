use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },

    #[error("illegal type: {0}")]
    IllegalType(String),

    #[error("string anomaly: {0}")]
    StringAnomaly(String),

    #[error("not a root system: {0}")]
    NotARootSystem(String),

    #[error("not an EARS: {0}")]
    NotAnEars(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("(R^sigma)^x empty: the decomposition does not apply")]
    EmptyNonisotropic,

    #[error("automorphism axiom {0} failed")]
    AutomorphismAxiom(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
