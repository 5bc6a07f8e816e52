use thiserror::Error;

/// Error taxonomy shared by all modules.
///
/// `Config` covers invalid inputs (bad indices, malformed specs, rejected
/// parameter combinations), `Domain` covers parameters outside the range a
/// method supports, and `Numeric` covers runtime numerical failures
/// (unnormalized states, singular systems, consistency-check violations).
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("numeric error: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;
