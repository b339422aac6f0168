use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("wave vector is zero; the curl has no eigen-basis on the DC mode")]
    ZeroWaveVector,

    #[error("duplicate wave vector ({0}, {1}, {2}); sum the amplitudes before building")]
    DuplicateWaveVector(f64, f64, f64),

    #[error("invalid medium: mu = {mu}, eps = {eps} (both must be finite and positive)")]
    InvalidMedium { mu: f64, eps: f64 },

    #[error("invalid periods ({0}, {1}, {2}); all must be finite and positive")]
    InvalidPeriods(f64, f64, f64),

    #[error("grid has no samples")]
    EmptyGrid,

    #[error("grid sample {index} is not finite")]
    NonFiniteSample { index: usize },

    #[error("grid data has {found} samples, expected {expected}")]
    GridSizeMismatch { expected: usize, found: usize },

    #[error("mode with wave vector ({0}, {1}, {2}) is not representable on the grid lattice")]
    OffLatticeMode(f64, f64, f64),

    #[error("CFL condition violated: courant number {0} > 1")]
    CflViolation(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("line {line}: {message}")]
    Format { line: usize, message: String },

    #[error("byte offset {offset}: {message}")]
    Binary { offset: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
