use thiserror::Error;

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_CHECK_FAILED: i32 = 4;

#[derive(Debug, Error)]
pub enum ShellError {
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("numerical failure: {0}")]
    Numerical(#[from] sta_core::Error),
    #[error("{failed} of {total} checks failed")]
    CheckFailed { failed: usize, total: usize },
}

impl ShellError {
    pub fn exit_code(&self) -> i32 {
        match self {
            ShellError::Config(_) | ShellError::Io { .. } => EXIT_CONFIG,
            ShellError::Numerical(_) => EXIT_NUMERICAL,
            ShellError::CheckFailed { .. } => EXIT_CHECK_FAILED,
        }
    }
}
