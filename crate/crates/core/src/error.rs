use thiserror::Error;

/// Failure modes shared by every module of the crate.
///
/// `Input` covers malformed user data (unknown letters, bad JSON, invalid
/// orderings). `Domain` covers mathematically invalid requests, most often a
/// parameter `p` that is not below the critical root of the alphabet involved.
#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("internal consistency error: {0}")]
    Internal(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) | Error::Io(_) => 1,
            Error::Domain(_) | Error::Internal(_) => 2,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Input(format!("malformed JSON: {e}"))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
