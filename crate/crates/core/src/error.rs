use thiserror::Error;

/// Errors surfaced by the kernel. Everything that can fail for a caller-visible
/// reason goes through this type; internal impossibilities panic.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("partition size mismatch: |{left}| = {left_size}, |{right}| = {right_size}")]
    SizeMismatch {
        left: String,
        left_size: usize,
        right: String,
        right_size: usize,
    },
    #[error("plethystic argument is not degree-truncatable (pure scalar term of weight 0)")]
    NonTruncatable,
    #[error("degree window exhausted at {step}")]
    WindowExhausted { step: String },
    #[error("({m},{n}) is not a coprime pair")]
    NotCoprime { m: u32, n: u32 },
    #[error("expected a homogeneous symmetric function")]
    NotHomogeneous,
    #[error("conjugation certificate failed for {step}: {detail}")]
    Certification { step: String, detail: String },
    #[error("cache error in {file}: {detail}")]
    Cache { file: String, detail: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("unknown check name: {0}")]
    UnknownCheck(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
