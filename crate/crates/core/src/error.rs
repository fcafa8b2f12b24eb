use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid table: {0}")]
    InvalidTable(String),

    #[error("{what} exceeds cap: {actual} > {limit}")]
    CapExceeded {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("element {element} out of range for order {order}")]
    ElementOutOfRange { element: usize, order: usize },

    #[error("operation is not associative: ({0}*{1})*{2} != {0}*({1}*{2})")]
    NotAssociative(usize, usize, usize),

    #[error("table is not a quasigroup")]
    NotQuasigroup,

    #[error("universe mismatch: partition on {partition} elements, table of order {order}")]
    UniverseMismatch { partition: usize, order: usize },

    #[error("set is not closed under the operation: {0}*{1} = {2} escapes")]
    NotClosed(usize, usize, usize),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
