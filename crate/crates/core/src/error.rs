use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("capacity error: {0}")]
    Capacity(String),

    #[error("{value} is out of range (limit {limit})")]
    Range { value: u64, limit: u64 },

    #[error("incomplete input: {0}")]
    IncompleteInput(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("data corruption: {0}")]
    DataCorruption(String),

    #[error("{0} is outside the domain of {1}")]
    Domain(f64, &'static str),
}
