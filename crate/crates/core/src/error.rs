use thiserror::Error;

/// Errors raised by the algebra, analysis, and scenario layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("dimension {dim} exceeds the supported maximum of {max}")]
    DimBudgetExceeded { dim: usize, max: usize },

    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("vectors are linearly dependent")]
    LinearlyDependent,

    #[error("invalid scalar literal {0:?}")]
    InvalidScalar(String),

    #[error("generator {0:?} is neither the discrimination generator nor tagged as commuting with the update")]
    UntaggedGenerator(String),

    #[error("no matrix assigned to generator {0:?}")]
    MissingAssignment(String),

    #[error("generator {0:?} is tagged as commuting with the update but its matrix does not")]
    TagViolation(String),

    #[error("update matrix required but not assigned")]
    MissingUpdate,

    #[error("matrix is not idempotent")]
    NotIdempotent,

    #[error("projector has rank {rank}, expected rank one")]
    NotRankOne { rank: usize },

    #[error("liar vector is not fixed by the liar projector")]
    LiarVectorOutsideProjector,

    #[error("admissible set is not closed under the update: image of config #{index} {image} is missing")]
    NotClosed { index: usize, image: String },

    #[error("admissible set: {0}")]
    InvalidAdmissibleSet(String),

    #[error("Jacobi restriction violated: projector preserved by both operators but not by their bracket")]
    JacobiViolation,

    #[error("expression syntax error at column {column}: {message}")]
    ExprSyntax { column: usize, message: String },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("validation error: {0}")]
    Validation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
