use thiserror::Error;

/// Errors raised by the numerical routines and configuration checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{func}: argument {value} outside domain {domain}")]
    Domain {
        func: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("{func}: no convergence after {iterations} iterations")]
    Convergence {
        func: &'static str,
        iterations: usize,
    },

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn domain(func: &'static str, value: f64, domain: &'static str) -> Self {
        Error::Domain {
            func,
            value,
            domain,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
