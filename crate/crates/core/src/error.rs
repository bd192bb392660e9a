use thiserror::Error;

/// Errors raised by the algebra kernel and the analysis pipeline.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("elements belong to different cyclotomic fields (conductors {0} and {1})")]
    FieldMismatch(u32, u32),

    #[error("polynomials belong to incompatible rings")]
    RingMismatch,

    #[error("division by zero")]
    DivisionByZero,

    #[error("polynomial division leaves remainder {remainder}")]
    NotDivisible { remainder: String },

    #[error("group not closed within cap {cap}")]
    GroupNotClosed { cap: usize },

    #[error("singular matrix")]
    SingularMatrix,

    #[error("step budget of {budget} reduction steps exhausted")]
    Resource { budget: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("non-principal image ideal ({generators} generators)")]
    NonPrincipalImage { generators: usize },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Syntax { .. }
            | Error::UnknownVariable(_)
            | Error::Input(_)
            | Error::FieldMismatch(..)
            | Error::RingMismatch => 1,
            Error::Resource { .. } => 3,
            Error::GroupNotClosed { .. }
            | Error::SingularMatrix
            | Error::DivisionByZero
            | Error::NotDivisible { .. }
            | Error::Precondition(_)
            | Error::NonPrincipalImage { .. }
            | Error::Internal(_) => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
