use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Arithmetic outside the field's domain, e.g. inverting zero.
    #[error("domain error: {0}")]
    Domain(String),

    /// A caller broke an operation's precondition (lengths, shapes, counts).
    #[error("contract violation: {0}")]
    Contract(String),

    /// Code or model parameters that do not describe a valid instance.
    #[error("invalid parameters: {0}")]
    Parameter(String),

    /// The field has fewer distinct nonzero points than the construction needs.
    #[error("field too small: need {needed} distinct nonzero points, GF(2^8) has 255")]
    FieldTooSmall { needed: usize },

    /// A linear system could not be solved.
    #[error("decode error: {0}")]
    Decode(String),

    /// The block cannot be rebuilt from its local group alone.
    #[error("block {0} is not locally repairable; use a global decode")]
    NotLocallyRepairable(usize),

    /// The reliability model was given rates that make it degenerate.
    #[error("model error: {0}")]
    Model(String),

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
