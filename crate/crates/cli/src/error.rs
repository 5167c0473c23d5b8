use std::fmt;
use std::path::{Path, PathBuf};

use dib_core::DibError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}", ConfigDisplay { file: file.as_deref(), field, line: *line, message })]
    Config { file: Option<PathBuf>, field: String, line: Option<(usize, usize)>, message: String },

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error(transparent)]
    Solver(#[from] DibError),
}

impl CliError {
    pub fn config(field: &str, message: &str) -> Self {
        CliError::Config { file: None, field: field.to_string(), line: None, message: message.to_string() }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }

    /// Attaches the file a config error came from, keeping an existing one.
    pub fn in_file(self, path: &Path) -> Self {
        match self {
            CliError::Config { file: None, field, line, message } => {
                CliError::Config { file: Some(path.to_path_buf()), field, line, message }
            }
            other => other,
        }
    }

    /// Process exit code: 1 for configuration problems, 2 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Solver(_) => 1,
            CliError::Io { .. } => 2,
        }
    }
}

struct ConfigDisplay<'a> {
    file: Option<&'a Path>,
    field: &'a str,
    line: Option<(usize, usize)>,
    message: &'a str,
}

impl fmt::Display for ConfigDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("config error")?;
        if let Some(file) = self.file {
            write!(f, " in {}", file.display())?;
        }
        if let Some((line, col)) = self.line {
            write!(f, " at line {line}, column {col}")?;
        }
        if !self.field.is_empty() && self.field != "." {
            write!(f, " (field `{}`)", self.field)?;
        }
        write!(f, ": {}", self.message)
    }
}
