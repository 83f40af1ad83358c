use thiserror::Error;

use crate::cartan::Weight;

/// Errors raised by the exact engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("unsupported evaluation: {0}")]
    UnsupportedEvaluation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("truncation depth {have} too small, need {need}")]
    Depth { have: usize, need: usize },
    #[error("no intertwiner L_{mu:?} -> L_{mu:?} (x) V has the requested expectation value")]
    NoIntertwiner { mu: Weight },
    #[error("genericity failure: {0}")]
    Genericity(String),
    #[error("input does not satisfy condition {condition}: {detail}")]
    ConditionFailed { condition: u8, detail: String },
    #[error("theorem violation: {0}")]
    TheoremViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
