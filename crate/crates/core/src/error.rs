use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in the library or the CLI.
///
/// Each variant maps onto one of the stable process exit codes, see
/// [`Error::exit_code`].
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on a numeric argument was violated.
    #[error("{0}")]
    Domain(String),

    /// Flags that parse individually but do not make sense together.
    #[error("{0}")]
    Usage(String),

    /// Malformed input data. `line` is 1-based.
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A symbol that does not belong to the alphabet it was checked against.
    #[error("symbol {symbol} is outside the alphabet of size {alphabet_size}")]
    OutOfAlphabet { symbol: u32, alphabet_size: usize },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// 2 for usage and domain errors, 3 for data errors, 4 for I/O errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::Usage(_) => 2,
            Error::Parse { .. } | Error::OutOfAlphabet { .. } => 3,
            Error::Io { .. } => 4,
        }
    }
}
