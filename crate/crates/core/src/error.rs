use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("cannot normalize a zero-norm wavefunction")]
    ZeroNorm,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A non-finite amplitude appeared during real-time propagation.
    #[error("numerical blow-up at step {step}")]
    BlowUp { step: u64 },

    #[error("imaginary-time relaxation did not converge within {steps} steps (last relative change {last_change:e})")]
    NotConverged { steps: u64, last_change: f64 },

    #[error("ansatz width underflow (a = {a:e}) at t = {t}")]
    WidthUnderflow { t: f64, a: f64 },

    #[error("non-finite variational state at t = {t}")]
    NonFiniteState { t: f64 },

    #[error("PT symmetry check requires trap_center = 0 (got {0})")]
    ShiftedTrap(f64),

    #[error("time grids differ: {0}")]
    TimeGridMismatch(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("malformed data file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit status used by the command-line harness.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidGrid(_) | Error::InvalidParameter(_) => 2,
            Error::Io(_) | Error::Format(_) => 4,
            _ => 3,
        }
    }
}
