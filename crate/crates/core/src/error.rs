use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a negative fundamental discriminant")]
    NotFundamental(i64),
    #[error("{0} is not prime")]
    NotPrime(i64),
    #[error("the zero ideal is not allowed here")]
    ZeroIdeal,
    #[error("ideal is not integral")]
    NotIntegral,
    #[error("element is not a unit modulo the ideal")]
    NotAUnit,
    #[error("no Groessencharacter exists for this modulus and weight")]
    NoGrossencharacter,
    #[error("modulus character is incompatible: {0}")]
    EtaIncompatible(String),
    #[error("character does not factor through the requested modulus")]
    NotExtendable,
    #[error("Q1 is not applicable to a cyclic class group")]
    Q1NotApplicable,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
