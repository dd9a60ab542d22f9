use std::fmt;
use std::path::Path;
use std::process::ExitCode;

use mocrop::ingest::IngestError;
use mocrop::{ConfigError, PipelineError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Kind {
    Internal = 1,
    Input = 2,
    Validation = 3,
}

#[derive(Debug)]
pub struct CliError {
    pub kind: Kind,
    pub message: String,
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn internal(message: impl Into<String>) -> Self {
        Self { kind: Kind::Internal, message: message.into() }
    }

    pub fn input(message: impl Into<String>) -> Self {
        Self { kind: Kind::Input, message: message.into() }
    }

    pub fn validation(message: impl Into<String>) -> Self {
        Self { kind: Kind::Validation, message: message.into() }
    }

    pub fn cannot_open(path: &Path, err: std::io::Error) -> Self {
        Self::input(format!("cannot open {}: {err}", path.display()))
    }

    pub fn cannot_write(path: &Path, err: std::io::Error) -> Self {
        Self::input(format!("cannot write {}: {err}", path.display()))
    }

    pub fn ingest(path: &Path, err: IngestError) -> Self {
        let message = format!("{}: {err}", path.display());
        if err.is_validation() {
            Self::validation(message)
        } else {
            Self::input(message)
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(self.kind as u8)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<ConfigError> for CliError {
    fn from(err: ConfigError) -> Self {
        Self::validation(format!("invalid configuration: {err}"))
    }
}

impl From<PipelineError> for CliError {
    fn from(err: PipelineError) -> Self {
        Self::validation(err.to_string())
    }
}
