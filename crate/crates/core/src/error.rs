use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("function `{id}` evaluated to {value} at x = {x}")]
    NonFinite { id: String, x: f64, value: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what}: {value} is outside {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: String,
    },

    #[error("derivative of order {order} is not available for `{id}`")]
    UnsupportedOrder { id: String, order: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("insufficient data: {have} usable points, need at least {need}")]
    InsufficientData { have: usize, need: usize },
}
