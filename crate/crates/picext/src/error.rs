use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("argument error: {0}")]
    Argument(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invariant violation: {0}")]
    Invariant(String),

    #[error("size guard exceeded: {0}")]
    SizeGuard(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
