use std::io;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("format error: {0}")]
    Format(String),
    #[error("unsupported PGM: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Core(#[from] fse_core::Error),
}
