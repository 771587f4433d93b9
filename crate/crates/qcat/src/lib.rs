//! Command-line front end, file formats and parallel sweeps for
//! [`qcat_core`].

pub mod cli;
pub mod formats;
pub mod sweep;

/// Errors of the std layer.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] qcat_core::Error),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    /// 2 for configuration problems, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_)
            | Error::Core(qcat_core::Error::UnsupportedConfiguration(_))
            | Error::Core(qcat_core::Error::InvalidScenario(_)) => cli::EXIT_INVALID,
            _ => cli::EXIT_FAILURE,
        }
    }
}
