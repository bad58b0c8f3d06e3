//! Error type shared by the library.

use thiserror::Error;

/// Errors raised when inputs violate a documented invariant.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("physical parameters must be strictly positive and finite: {0}")]
    InvalidParams(String),

    #[error("mode order {order} exceeds the supported cap {cap}")]
    ModeOrderTooLarge { order: u32, cap: u32 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("field values do not match the grid: {0}")]
    ShapeMismatch(String),

    #[error("{0} requires a two-dimensional mode")]
    ModeNotTwoDimensional(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
