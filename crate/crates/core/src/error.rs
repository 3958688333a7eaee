use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
    #[error("arity mismatch: {0}")]
    Arity(String),
    #[error("diagrams belong to different signatures")]
    SignatureMismatch,
    #[error("expected a closed diagram, got boundary ({outputs},{inputs})")]
    NotClosed { outputs: usize, inputs: usize },
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("enumeration budget exceeded: {0}")]
    Budget(String),
    #[error("invalid model: {0}")]
    Model(String),
    #[error("missing parameter assignment: {0}")]
    MissingParams(String),
    #[error("diagram outside the character's domain: {0}")]
    Domain(String),
    #[error("insufficient interpolation points: {0}")]
    InsufficientPoints(String),
    #[error("interpolation consistency witness failed: {0}")]
    Inconsistent(String),
    #[error("value is not a monomial in the parameters: {0}")]
    NonMonomial(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("algebra is not semisimple")]
    NotSemisimple,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
