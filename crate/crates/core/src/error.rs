use thiserror::Error;

/// Errors raised by parsing, generation and the width/duality/minor algorithms.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("vertex {vertex} out of range for a digraph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("loop at vertex {0}")]
    Loop(usize),

    #[error("duplicate arc ({0}, {1})")]
    DuplicateArc(usize, usize),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// An input exceeded one of the tunable [`Limits`](crate::Limits).
    #[error("size guard `{guard}` exceeded: {actual} > {limit}")]
    SizeGuard {
        guard: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A step that the underlying theory guarantees could not be carried out.
    /// This always indicates a bug and is never swallowed.
    #[error("internal assertion failed: {0}")]
    Internal(String),
}

impl Error {
    /// Stable machine-readable code, used by the CLI error envelope.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::VertexOutOfRange { .. } => "vertex_out_of_range",
            Error::Loop(_) => "loop",
            Error::DuplicateArc(..) => "duplicate_arc",
            Error::InvalidParams(_) => "invalid_params",
            Error::SizeGuard { .. } => "size_guard",
            Error::Precondition(_) => "precondition",
            Error::InvalidInput(_) => "invalid_input",
            Error::Internal(_) => "internal",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
