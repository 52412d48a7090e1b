use thiserror::Error;

use crate::algebra::Field;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("cannot factor {0} over Q without a factorization hint")]
    FactorizationUnavailable(String),
    #[error("{0} is not irreducible")]
    NotIrreducible(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not {0}-primary")]
    NotPrimary(String),
    #[error("decomposition criterion fails: {0}")]
    CriterionFails(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
    #[error("witness verification failed: {0}")]
    VerificationFailed(String),
    #[error("enumeration budget exceeded: {0}")]
    Budget(String),
    #[error("missing certificate: {0}")]
    MissingCertificate(String),
    #[error("transport precondition ({lemma}): {reason}")]
    TransportPrecondition { lemma: &'static str, reason: String },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
