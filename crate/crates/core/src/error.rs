use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed hex: {0}")]
    MalformedHex(String),
    #[error("value out of range: must be below the field modulus")]
    OutOfRange,
    #[error("element is not invertible (zero)")]
    NotInvertible,
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("parameter validation failed: {}", .0.join("; "))]
    Validation(Vec<String>),
    #[error("point is not on curve")]
    NotOnCurve,
    #[error("point is not in the order-r subgroup")]
    WrongSubgroup,
    #[error("point at infinity is not a valid input")]
    Infinity,
    #[error("degenerate addition step: {0}")]
    Degenerate(&'static str),
    #[error("generator search exhausted after {0} candidates")]
    SearchExhausted(u64),
    #[error("unknown {kind}: {name}")]
    Unknown { kind: &'static str, name: String },
    #[error("missing cost entry `{op}` in profile `{profile}`")]
    MissingCost { profile: String, op: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("task graph contains a cycle")]
    CyclicGraph,
    #[error("serialization: {0}")]
    Serde(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serde(e.to_string())
    }
}
