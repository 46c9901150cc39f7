use thiserror::Error;

/// Errors raised by the library. The CLI maps each variant onto an exit code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown molecule `{name}`; available: {available}")]
    UnknownMolecule { name: String, available: String },

    #[error("not found: {0}")]
    Lookup(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("root finding failed: {0}")]
    RootFinding(String),

    #[error("registry error: {0}")]
    Registry(String),

    #[error("fixture error: {0}")]
    Fixture(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// 3 for failed lookups, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::UnknownMolecule { .. } | Error::Lookup(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
