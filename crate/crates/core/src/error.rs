use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite coordinate at index {0}")]
    NonFinite(usize),

    #[error("outer map `{map}` is not defined at {arg}")]
    Domain { map: String, arg: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("family constraint violated: {0}")]
    Family(String),

    #[error("h_max undefined (complement empty at this resolution)")]
    EmptyComplement,

    #[error("mu_max undefined: critical set is empty")]
    EmptyCriticalSet,

    #[error("bracket invalid: {0}")]
    BracketInvalid(String),

    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("open component: convexity of a polyline requires a closed curve")]
    OpenComponent,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
