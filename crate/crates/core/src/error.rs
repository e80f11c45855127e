use thiserror::Error;

use crate::matroid::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A search or enumeration hit a configured cap. Never a wrong answer.
    #[error("budget exceeded: {what} (cap {cap})")]
    Budget { what: &'static str, cap: u64 },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("matroid axiom violated: {0}")]
    Axiom(Violation),

    #[error("restrictions to the shared set differ")]
    RestrictionMismatch,

    #[error("shared restriction is not modular: flats {0} and {1}")]
    NotModular(String, String),

    #[error("linear class violated: theta {0} has exactly two balanced cycles")]
    LinearClass(String),

    #[error("gains disagree on shared edge `{0}`")]
    GainDisagreement(String),

    #[error("dagger condition fails: {0}")]
    Dagger(String),

    #[error("formula is not {delta}-confined (needs {needed})")]
    NotConfined { delta: u32, needed: u32 },

    #[error("registry does not match formula shape")]
    Shape,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invalid(msg.into()))
}
