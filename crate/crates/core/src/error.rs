use thiserror::Error;

/// Errors raised across the kernel. Each variant maps onto one of the CLI
/// exit-code classes through [`Error::exit_code`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cyclotomic orders differ ({left} vs {right}); embed into a common order first")]
    OrderMismatch { left: u32, right: u32 },
    #[error("cyclotomic order {order} is not supported (limit {limit})")]
    UnsupportedOrder { order: u32, limit: u32 },
    #[error("cannot embed order {from} into order {to}: {to} is not a multiple of {from}")]
    BadEmbedding { from: u32, to: u32 },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("zero module has no GK dimension")]
    ZeroModule,
    #[error("regular parameter required: {0}")]
    RegularityRequired(String),
    #[error("invalid twist: {0}")]
    InvalidTwist(String),
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
    #[error("FALSIFICATION: {0}")]
    Falsification(String),
}

impl Error {
    pub fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    /// 1 for invalid input, 2 for exhausted budgets, 3 for internal
    /// inconsistencies and falsification alarms.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Budget(_) => 2,
            Error::Inconsistency(_) | Error::Falsification(_) => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
