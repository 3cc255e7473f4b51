use std::path::PathBuf;

/// Failures while reading inputs or dispatching a command.
#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: invalid JSON: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    /// Schema violation at a JSON pointer inside the document.
    #[error("{}: {message}", display_pointer(.pointer))]
    Schema { pointer: String, message: String },
    /// The command does not fit the problem (for instance, constraints missing).
    #[error("{0}")]
    Shape(String),
    #[error(transparent)]
    Core(#[from] wsharp_core::Error),
    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
}

fn display_pointer(p: &str) -> &str {
    if p.is_empty() {
        "(document root)"
    } else {
        p
    }
}

pub type Result<T> = std::result::Result<T, InputError>;
