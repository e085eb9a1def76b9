use thiserror::Error;

/// Error classes used across the crate.
///
/// `Config` covers bad catalog identifiers and malformed run setups,
/// `Argument` covers dimension or domain mismatches in library calls,
/// `Parameter` covers out-of-range model parameters, `Accuracy` covers
/// evaluations rejected by a truncation guard, `Consistency` covers
/// inputs that are individually valid but disagree with each other, and
/// `Unsupported` covers instances a routine deliberately does not handle.
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("argument error: {0}")]
    Argument(String),
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("accuracy error: {0}")]
    Accuracy(String),
    #[error("consistency error: {0}")]
    Consistency(String),
    #[error("unsupported instance: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
