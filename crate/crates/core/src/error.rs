use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A value violates a domain constraint, e.g. `beta must lie in (0,1)`.
    #[error("{field}: {constraint} (got {value})")]
    Invalid {
        field: String,
        constraint: &'static str,
        value: f64,
    },

    /// A structural problem that is not tied to a single number.
    #[error("{0}")]
    Validation(String),

    /// Scenario text is not well-formed.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// The integrator produced a non-finite state.
    #[error("solver produced a non-finite state at t = {t}")]
    NonFinite { t: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, constraint: &'static str, value: f64) -> Self {
        Error::Invalid {
            field: field.into(),
            constraint,
            value,
        }
    }

    /// True for errors caused by bad input rather than the environment.
    pub fn is_validation(&self) -> bool {
        !matches!(self, Error::Io(_))
    }
}
