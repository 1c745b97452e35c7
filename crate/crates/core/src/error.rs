use thiserror::Error;

use crate::graph::TreeViolation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("size limit exceeded: {what} requires n = {n}, limit is {limit}")]
    SizeLimit {
        what: &'static str,
        n: usize,
        limit: usize,
    },

    #[error("graph has no parent nodes (no non-leaf node adjacent to a leaf)")]
    NoParents,

    #[error("potential table has no entry for functionality {0}")]
    IncompletePotential(usize),

    #[error("exact arithmetic unavailable: {0}")]
    UnsupportedExactMode(String),

    #[error("degenerate average: {name} = {value} leaves a non-positive denominator")]
    DegenerateAverage { name: &'static str, value: f64 },

    #[error("argument out of domain: {0}")]
    OutOfDomain(String),

    #[error("not a tree: {0}")]
    InvalidTree(TreeViolation),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short kebab-case tag used in CSV status columns.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "invalid-parameter",
            Error::SizeLimit { .. } => "size-limit",
            Error::NoParents => "no-parents",
            Error::IncompletePotential(_) => "incomplete-potential",
            Error::UnsupportedExactMode(_) => "unsupported-exact-mode",
            Error::DegenerateAverage { .. } => "degenerate-average",
            Error::OutOfDomain(_) => "out-of-domain",
            Error::InvalidTree(_) => "invalid-tree",
            Error::Parse { .. } => "parse",
            Error::Io(_) => "io",
        }
    }
}
