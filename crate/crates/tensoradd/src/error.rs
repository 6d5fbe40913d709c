use thiserror::Error;

/// Errors shared across the workbench.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NotPrime(u32),
    #[error("modulus {0} out of range (need 2 <= p < 65536)")]
    ModulusOutOfRange(u32),
    #[error("mixed-field arithmetic: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("operation requires a prime field")]
    UnsupportedField,
    #[error("input too large: {0}")]
    TooLarge(String),
    #[error("term {0} is not classifiable into any of the seven types")]
    Unclassifiable(usize),
    #[error("term {0} has label {1}, expected Prime or Bis")]
    NotPrimeOrBis(usize, String),
    #[error("pair is not replete with respect to term {0}")]
    NotReplete(usize),
    #[error("slice has rank {0}, expected rank 1")]
    SliceRankNotOne(usize),
    #[error("functional does not annihilate the hook column space")]
    GammaDoesNotAnnihilateHook,
    #[error("invalid argument: {0}")]
    BadArgument(String),
    #[error("decomposition does not certify the tensor")]
    DoesNotCertify,
}

pub type Result<T> = std::result::Result<T, Error>;
