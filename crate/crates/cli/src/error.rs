use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{message}")]
    Config { field: Option<String>, message: String },
    #[error(transparent)]
    Numerical(#[from] lmg_texture::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn config(field: Option<&str>, message: String) -> Self {
        CliError::Config { field: field.map(str::to_string), message }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config { .. } => 2,
            CliError::Numerical(_) => 3,
            CliError::Io { .. } => 1,
        }
    }

    /// One line: `error kind=<kind> [field=<key>] message=<json string>`.
    pub fn to_line(&self) -> String {
        let (kind, field) = match self {
            CliError::Config { field, .. } => ("config", field.as_deref()),
            CliError::Numerical(_) => ("numerical", None),
            CliError::Io { .. } => ("io", None),
        };
        let message = serde_json::to_string(&self.to_string()).unwrap_or_else(|_| "\"\"".into());
        match field {
            Some(f) => format!("error kind={kind} field={f} message={message}"),
            None => format!("error kind={kind} message={message}"),
        }
    }
}
