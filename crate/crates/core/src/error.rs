use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("0 has no prime factorization")]
    ZeroFactorization,

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("rule incomplete: no value for f({p}^{alpha})")]
    RuleIncomplete { p: u64, alpha: u32 },

    #[error("arithmetic overflow while computing {0}")]
    Overflow(String),

    /// The rule failed to descend from `start`; only possible for rules
    /// violating property I.
    #[error(
        "property violation: non-descending rule (f({value}) = {image}, reached from {start})"
    )]
    NonDescending { start: u64, value: u64, image: u64 },

    #[error("invalid rule: {0}")]
    InvalidRule(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot read rule {path}: {source}")]
    RuleUnreadable {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    RuleFile {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
