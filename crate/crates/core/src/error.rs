use thiserror::Error;

use crate::connsys::{Order, SubsetMask};

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: bad JSON, unknown labels, masks wider than the ground set.
    #[error("input error: {0}")]
    Input(String),

    /// A documented precondition of an operation does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// A partition with cyclic order has an interval union of too high order.
    #[error("not a {k}-pseudoflower: interval {interval:?} has order {order}")]
    NotPseudoflower {
        k: u32,
        /// Petal indices of the offending interval, in ring order.
        interval: Vec<usize>,
        side: SubsetMask,
        order: Order,
    },

    /// A property guaranteed by the theory failed; the input system is not
    /// what it claims to be, or there is a bug.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn is_input(&self) -> bool {
        matches!(self, Error::Input(_) | Error::Json(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn input<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Input(msg.into()))
}

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}

pub(crate) fn invariant<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Invariant(msg.into()))
}
