use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("not a half-integer: {0}")]
    NotHalfInteger(String),

    #[error("j = {j} is not admissible for k = {k}: {reason}")]
    InadmissibleJ { j: String, k: String, reason: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parameter domain error in {function}: {reason}")]
    ParameterDomain { function: &'static str, reason: String },

    #[error("series for {function} did not converge within {terms} terms (last relative term {last_term:e})")]
    NonConvergence {
        function: &'static str,
        terms: usize,
        last_term: f64,
    },

    #[error("consistency check failed: {0}")]
    Consistency(String),

    #[error("degenerate transformation: {0}")]
    Degenerate(String),

    #[error("inadmissible level: {0}")]
    Inadmissible(String),

    #[error("unsupported combination: {0}")]
    Unsupported(String),

    #[error("grid error: {0}")]
    Grid(String),

    #[error("oracle error: {0}")]
    Oracle(String),

    #[error("unit conversion error: {0}")]
    Units(String),
}
