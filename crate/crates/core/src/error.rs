use std::fmt;
use std::io;

use thiserror::Error;

/// Key of one simulation task inside a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaskKey {
    pub n: usize,
    pub p: f64,
    pub k: f64,
    pub rep: usize,
}

impl fmt::Display for TaskKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N={} p={} K={} rep={}", self.n, self.p, self.k, self.rep)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid range: lo = {lo} > hi = {hi}")]
    InvalidRange { lo: f64, hi: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("node {node} has degree 0; the network coupling K/k_i is undefined")]
    DegenerateDegree { node: usize },

    #[error("no connected sample after {attempts} attempts")]
    RejectionExhausted { attempts: usize },

    #[error("numerical blowup at step {step}")]
    NumericalBlowup { step: usize },

    #[error("incomplete result table: {0}")]
    IncompleteTable(String),

    #[error("no transition window: grand-mean R never lies in [{lo}, {hi}]")]
    NoTransition { lo: f64, hi: f64 },

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("task {key} failed: {source}")]
    Task {
        key: TaskKey,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// The innermost error, looking through sweep task wrappers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Task { source, .. } => source.root(),
            other => other,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
