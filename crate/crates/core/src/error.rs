use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid time scale: {0}")]
    InvalidTimeScale(String),

    #[error("{t} is not a point of the time scale")]
    NotInTimeScale { t: f64 },

    #[error("{t} is not a grid node")]
    NotANode { t: f64 },

    #[error("no forward node to difference against at t = {t}")]
    NoForwardNode { t: f64 },

    #[error("{field} {message}")]
    InvalidParameter { field: &'static str, message: String },

    #[error("domain error: {0}")]
    Domain(String),
}

impl Error {
    pub(crate) fn param(field: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
