use thiserror::Error;

/// Errors raised by the library operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("outside the domain of the operation: {0}")]
    Domain(String),
    #[error("matrix is singular")]
    Singular,
    #[error("the zero matrix has no nonzero singular values")]
    EmptyDecomposition,
    #[error("not supported: {0}")]
    NotSupported(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// Stable machine-readable identifier, used by the CLI error object.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Dimension(_) => "dimension",
            Error::Precondition(_) => "precondition",
            Error::Domain(_) => "domain",
            Error::Singular => "singular",
            Error::EmptyDecomposition => "empty_decomposition",
            Error::NotSupported(_) => "not_supported",
            Error::Numerical(_) => "numerical",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
