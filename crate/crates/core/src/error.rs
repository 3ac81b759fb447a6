use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("capacity error: {0}")]
    Capacity(String),
    #[error("unsupported conjugacy: {0}")]
    UnsupportedConjugacy(String),
    #[error("pattern violates the unit-step condition at index {index}")]
    PatternStep { index: usize },
    #[error("pattern value out of range at index {index}")]
    PatternRange { index: usize },
    #[error("resolution error: {0}")]
    Resolution(String),
    #[error("chain is not taut: {0}")]
    NotTaut(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("certificate failed: empty itinerary interval for word {word:?}")]
    EmptyBranch { word: Vec<usize> },
}

pub type Result<T> = std::result::Result<T, Error>;
