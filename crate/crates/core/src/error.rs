use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("insufficient data: need at least {needed} values, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("unknown model `{0}`")]
    UnknownModel(String),

    #[error("unknown parameter `{param}` for model `{model}`")]
    UnknownParameter { model: String, param: String },

    #[error("shape {shape} is not supported on measure {measure}")]
    UnsupportedShape { shape: String, measure: String },

    #[error("operation requires {required}, got {got}")]
    UnsupportedMeasure { required: String, got: String },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// True for errors caused by the caller's request rather than by the numerics.
    pub fn is_usage(&self) -> bool {
        !matches!(self, Error::Numerical(_))
    }
}
