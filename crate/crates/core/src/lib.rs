//! Toolkit for the split delivery vehicle routing problem (SDVRP).
//!
//! The pipeline: an SDVRP instance is turned into a CVRP instance by
//! splitting each customer's demand into smaller co-located customers
//! ([`split`]), the CVRP is solved with an embedded local-search solver
//! ([`cvrp`]), and the solution is projected back onto the original
//! instance ([`sdvrp`]). [`bench`] runs strategy comparisons against
//! best-known costs, and [`tsplib`] reads and writes instance and
//! solution files.

pub mod bench;
pub mod cvrp;
pub mod model;
pub mod sdvrp;
pub mod split;
pub mod tsplib;

use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied value violates a precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A text input could not be parsed. `line` is 1-based.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// The requested operation cannot produce a feasible result.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// An internal invariant was violated; indicates a bug, not bad input.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
