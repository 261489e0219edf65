use thiserror::Error;

pub type Result<T> = std::result::Result<T, LabError>;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("config error at line {line}: {message}")]
    ConfigInvalid { line: usize, message: String },

    #[error("unknown experiment '{0}' (see `csf-lab list`)")]
    UnknownExperiment(String),

    #[error("experiment '{name}' failed: {source}")]
    Solver {
        name: String,
        #[source]
        source: csf_core::Error,
    },

    #[error(transparent)]
    Core(#[from] csf_core::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl LabError {
    pub fn config(line: usize, message: impl Into<String>) -> Self {
        LabError::ConfigInvalid {
            line,
            message: message.into(),
        }
    }
}
