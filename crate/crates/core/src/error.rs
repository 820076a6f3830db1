use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("structure error: {0}")]
    Structure(String),
    #[error("lookup error: {0}")]
    Lookup(String),
    #[error("carrier error: {0}")]
    Carrier(String),
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("limit exceeded: {0}")]
    Limit(String),
    #[error("unbalanced complex: {0}")]
    Unbalanced(String),
    #[error("format error: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
