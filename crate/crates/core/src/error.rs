use crate::exponent::ExponentError;
use crate::scalar::roots::RootError;
use crate::scalar::symbol::SymbolError;
use crate::scalar::ScalarError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Exponent(#[from] ExponentError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error("ord of the zero series")]
    OrdOfZero,
    #[error("the cloud of points is empty")]
    EmptyCloud,
    #[error("all partial derivatives vanish along the series")]
    AllPartialsVanish,
    #[error("roots need an algebraic extension: {0}")]
    NeedsAlgebraicExtension(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
