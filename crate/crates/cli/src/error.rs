use thiserror::Error;

/// Failures of a scenario run, each mapped to a process exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },
    #[error("numeric failure during {context}: {source}")]
    Numeric {
        context: String,
        #[source]
        source: nikishin::Error,
    },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn config(field: impl Into<String>, message: impl ToString) -> Self {
        CliError::Config {
            field: field.into(),
            message: message.to_string(),
        }
    }

    pub fn numeric(context: impl Into<String>, source: nikishin::Error) -> Self {
        CliError::Numeric {
            context: context.into(),
            source,
        }
    }

    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    /// 2 for configuration and file problems, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Io { .. } => 2,
            CliError::Numeric { .. } => 3,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::config("x", "bad").exit_code(), 2);
        assert_eq!(CliError::numeric("solve", nikishin::Error::NoKernel).exit_code(), 3);
        let io = CliError::io("/nope", std::io::Error::other("gone"));
        assert_eq!(io.exit_code(), 2);
        assert!(io.to_string().contains("/nope"));
    }
}
