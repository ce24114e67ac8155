use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The zero element has no valuation profile, polygon, or transform.
    #[error("valuation of the zero element; the caller should map this to inf")]
    ZeroElement,

    #[error("negative value not allowed: {0}")]
    NegativeValue(String),

    #[error("invalid coefficient profile: {0}")]
    InvalidProfile(String),

    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),

    #[error("invalid transform: {0}")]
    InvalidTransform(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Evaluation past the last node of a truncated polygon.
    #[error("unknown region: x = {x} lies beyond the last node of a truncated polygon")]
    UnknownRegion { x: String },

    /// Operations that require complete (constant-tail) data.
    #[error("{op} undefined under truncation")]
    Truncated { op: &'static str },

    /// A decision could not be certified from the available finite data.
    #[error("inconclusive: {0}")]
    Inconclusive(String),

    /// The polygon near zero is not determined by the given transform.
    #[error("polygon underdetermined near 0 (validity floor {floor} > 0)")]
    Underdetermined { floor: String },

    /// A certified enclosure could not be tightened to the requested width.
    #[error("requested precision unreachable within the iteration cap; achieved width {achieved_width}")]
    PrecisionUnreachable { achieved_width: String },

    /// The builder could not certify the rounding tolerance at an index.
    #[error("working precision insufficient for the tolerance at index {index}")]
    PrecisionInsufficient { index: u64 },

    /// A transform value needed by a check is not certified exact.
    #[error("transform value at breakpoint {index} not certified exact; increase truncation")]
    IncreaseTruncation { index: u64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
