use std::path::PathBuf;

use gravity_core::GravityError;
use thiserror::Error;

/// Failures while reading inputs or writing outputs.
#[derive(Debug, Error)]
pub enum ToolkitError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}:{line}: {message}", path.display())]
    Parse { path: PathBuf, line: u64, message: String },
    #[error("{}:{line}: duplicate iso {iso}", path.display())]
    DuplicateIso { path: PathBuf, line: u64, iso: String },
    #[error("no countries in common between {} and {}", gdp.display(), capitals.display())]
    NoCommonCountries { gdp: PathBuf, capitals: PathBuf },
    #[error(transparent)]
    Core(#[from] GravityError),
    #[error("{0}")]
    Output(String),
}

pub type Result<T> = std::result::Result<T, ToolkitError>;

pub(crate) fn io_err(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> ToolkitError + '_ {
    move |source| ToolkitError::Io { path: path.to_path_buf(), source }
}
