use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid experiment specification: {0}")]
    Spec(String),

    #[error("cannot parse config: {0}")]
    Toml(#[from] toml::de::Error),

    #[error(transparent)]
    Core(#[from] ddf_core::Error),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;

pub(crate) fn spec_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(CliError::Spec(msg.into()))
}
