use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed cube file: {0}")]
    Format(String),

    #[error("cube has zero Frobenius norm and cannot be normalized")]
    ZeroNormCube,

    #[error("bad flag: {0}")]
    BadFlag(String),

    #[error("channel {channel} outside 1..={p}")]
    BadChannel { channel: usize, p: usize },

    #[error("strassen and naive products differ by {0:e}, above 1e-8")]
    KernelMismatch(f64),

    #[error(transparent)]
    Core(#[from] mprod_core::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;
