use thiserror::Error;

/// Failure modes shared by every module.
///
/// The variants line up with the command-line exit-code contract: usage and
/// precondition errors are caller mistakes, invariant failures mean a
/// computed object violated a structural property it must have, and resource
/// errors mean a configured size bound was hit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal invariant failure: {0}")]
    Invariant(String),
    #[error("resource bound exceeded: {0}")]
    Resource(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

macro_rules! invariant {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err($crate::Error::Invariant(format!($($arg)+)));
        }
    };
}
pub(crate) use invariant;
