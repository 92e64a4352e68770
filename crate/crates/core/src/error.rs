use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("{what} out of range: {value} (allowed {allowed})")]
    OutOfRange {
        what: &'static str,
        value: u64,
        allowed: String,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("recursion breaks down at level {level}: effective parameter {lambda} is not supercritical")]
    RecursionBreakdown { level: usize, lambda: f64 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
