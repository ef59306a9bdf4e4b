use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    /// A run finished but broke an invariant it checks.
    #[error("numerical validation failed: {0}")]
    Validation(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<clockgame_core::Error> for CliError {
    fn from(e: clockgame_core::Error) -> Self {
        match e {
            clockgame_core::Error::Numerical(_) => CliError::Validation(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub(crate) fn config_error(field: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{field}: {msg}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::from(clockgame_core::Error::Numerical("drift".into())).exit_code(), 3);
        assert_eq!(CliError::from(clockgame_core::Error::Domain("bad".into())).exit_code(), 2);
        assert_eq!(CliError::Validation("x".into()).exit_code(), 3);
    }
}
