use thiserror::Error;

use crate::graph::{Edge, Owner};

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid edge: {0}")]
    InvalidEdge(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("illegal move: edge {edge} is already owned by {owner:?}")]
    IllegalMove { edge: Edge, owner: Owner },

    #[error("board exhausted: no unclaimed edges remain")]
    ExhaustedBoard,

    #[error("strategy fault ({strategy}): {reason}")]
    StrategyFault { strategy: String, reason: String },

    #[error("parameters violate the validity region: {}", .0.join("; "))]
    InvalidParams(Vec<String>),

    #[error("no valid board size: c*delta = {c_delta} is not below (1-beta)^2 = {bound}")]
    NoValidN { c_delta: f64, bound: f64 },

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("malformed transcript: {0}")]
    Transcript(String),
}
