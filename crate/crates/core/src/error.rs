use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("free variable `{0}` has no value")]
    Unbound(String),
    #[error("wrong shape: {0}")]
    Shape(String),
    #[error("value too large to enumerate: {0}")]
    TooLarge(String),
    #[error("overflow: cardinality {cardinality} exceeds budget {budget}")]
    Overflow { cardinality: String, budget: String },
    #[error("budget exhausted: {0}")]
    Budget(String),
    #[error("coloring space exceeds ceiling: {0}")]
    Ceiling(String),
    #[error("counting step failed: {0}")]
    Counting(String),
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
}

pub type Result<T> = std::result::Result<T, Error>;
