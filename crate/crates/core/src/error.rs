use std::io;

use thiserror::Error;

/// Errors produced by ingestion, fitting, persistence and evaluation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("no pairs")]
    NoPairs,

    #[error("no interactions")]
    NoInteractions,

    #[error(
        "no overlap between interactions and model \
         ({dropped_entities} unknown entities, {dropped_users} users dropped)"
    )]
    NoOverlap {
        dropped_entities: usize,
        dropped_users: usize,
    },

    #[error("unknown entity: {0}")]
    UnknownEntity(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("gram matrix is not positive definite for lambda = {lambda} (pivot {pivot})")]
    NotPositiveDefinite { lambda: f64, pivot: usize },

    #[error("invalid model file: {0}")]
    Format(String),

    #[error("did not converge after {iterations} iterations (gradient norm {grad_norm:e})")]
    NotConverged { iterations: usize, grad_norm: f64 },

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
