use thiserror::Error;

/// Errors raised by field construction, ring arithmetic, matrix machinery and
/// the decoding front ends.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field construction failed: {0}")]
    Construction(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("points are linearly dependent over the fixed field (point {index})")]
    DependentPoints { index: usize },

    #[error("leading position of the zero vector is undefined")]
    ZeroVector,

    #[error("shift error: {0}")]
    Shift(String),

    #[error("simple transformation not applicable: {0}")]
    Transform(String),

    #[error("matrix does not have full rank")]
    SingularMatrix,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid instance: {0}")]
    Instance(String),

    #[error("cannot encode message: {0}")]
    Encode(String),

    #[error("channel error: {0}")]
    Channel(String),

    #[error("context mismatch: {0}")]
    Context(String),

    #[error("malformed input: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
