use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what}: argument {value} outside {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("density series unusable at x = {x}; smallest usable x is {smallest_usable_x}")]
    SeriesDiverged { x: f64, smallest_usable_x: f64 },

    #[error("unsupported regime: {0}")]
    Unsupported(String),

    #[error("ill-conditioned design (condition number {condition:.3e}); widen the fitting window")]
    IllConditioned { condition: f64 },

    #[error("metadata mismatch: {0}")]
    Mismatch(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("tail known on [0, {domain_hi}] but integration needs [0, {needed}]")]
    TailDomain { domain_hi: f64, needed: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(what: &'static str, value: f64, domain: &'static str) -> Error {
    Error::Domain {
        what,
        value,
        domain,
    }
}
