use thiserror::Error;

use crate::interval::Interval;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// The cosine enclosure of the box touches zero; the caller has to shrink the box.
    #[error("cosine enclosure is not certainly positive on {0}")]
    CosNotPositive(Interval),

    #[error("radius {radius} too large: {reason}")]
    RadiusTooLarge { radius: f64, reason: String },

    #[error("identity mismatch: {0}")]
    IdentityMismatch(String),

    /// A coefficient that should vanish at an endpoint is not exactly zero.
    #[error("vanishing order mismatch: {0}")]
    OrderMismatch(String),

    #[error("endpoint bound not certainly positive: {0}")]
    NotPositive(String),

    #[error("no certified sign change on {0}")]
    NoSignChange(Interval),

    #[error("identity {which} violated at x = {worst_x}: relative residual {residual:e}")]
    IdentityViolation {
        which: String,
        worst_x: f64,
        residual: f64,
    },

    #[error("invalid hex float {0:?}")]
    HexFloat(String),

    #[error("unknown inequality id {0:?}")]
    UnknownId(String),

    #[error("malformed certificate: {0}")]
    Format(String),
}
