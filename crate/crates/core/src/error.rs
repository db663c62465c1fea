use thiserror::Error;

/// Errors surfaced by the simulator library.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied value is outside the operation's domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An internal invariant failed after a computation. This signals a bug
    /// in the library, never bad user input, and is never repaired silently.
    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),

    /// Configuration file rejected (syntax, unknown key, missing key, or
    /// an inconsistent combination of keys).
    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
