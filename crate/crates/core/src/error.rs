use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("Bessel order {0} is out of range (supported: 0, 1)")]
    OrderOutOfRange(u32),
    #[error("singular argument: {0} requires t > 0")]
    SingularArgument(&'static str),
    #[error("kernel evaluated at coincident points")]
    SingularPoint,
    #[error("invalid direction grid: {0}")]
    InvalidGrid(String),
    #[error("unknown surface id `{0}`")]
    UnknownSurface(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("insufficient resolution: {got:.2} nodes per shear wavelength, need {need:.2}")]
    Resolution { got: f64, need: f64 },
    #[error("boundary integral system is singular")]
    SingularSystem,
    #[error("evaluation point ({0}, {1}) is not strictly above the surface")]
    Domain(f64, f64),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("geometry mismatch: {0}")]
    Mismatch(String),
    #[error("dataset format version {found} is not supported (expected {expected})")]
    Version { found: u32, expected: u32 },
    #[error("dataset checksum mismatch (file truncated or corrupted)")]
    Checksum,
    #[error("malformed file: {0}")]
    Format(String),
    #[error("config error in `{field}`: {msg}")]
    Config { field: String, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn config(field: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            msg: msg.into(),
        }
    }
}
