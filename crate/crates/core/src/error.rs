use std::io;
use std::path::Path;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid arguments or parameters supplied by the caller.
    #[error("usage error: {0}")]
    Usage(String),

    /// Input file does not follow the expected format. `line` is 1-based.
    #[error("format error in {source_name}{}: {msg}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Format {
        source_name: String,
        line: Option<usize>,
        msg: String,
    },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
}

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub fn format(source_name: impl Into<String>, line: Option<usize>, msg: impl Into<String>) -> Self {
        Error::Format {
            source_name: source_name.into(),
            line,
            msg: msg.into(),
        }
    }

    pub fn io(path: &Path, source: io::Error) -> Self {
        Error::Io {
            path: path.display().to_string(),
            source,
        }
    }

    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 2,
            Error::Format { .. } => 3,
            Error::Io { .. } => 4,
        }
    }
}
