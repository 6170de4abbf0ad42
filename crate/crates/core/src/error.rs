use std::path::PathBuf;

use num_bigint::BigInt;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Broad failure classes. The command-line front end maps these onto exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// The request itself is invalid (bad level, primes not covering N, ...).
    Usage,
    /// Curve data is missing, corrupt or does not cover the request.
    Data,
    /// A mathematical precondition failed on otherwise well-formed input.
    Domain,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular curve: discriminant is zero")]
    Singular,

    #[error("invalid request: {0}")]
    Usage(String),

    #[error("integer {value} is not smooth over {primes:?}")]
    NotSmooth { value: BigInt, primes: Vec<u64> },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("line {line}: {reason}: {text:?}")]
    Parse {
        line: usize,
        text: String,
        reason: String,
    },

    #[error(
        "insufficient table coverage: N(S) = {ns_bound} exceeds the largest conductor \
         available ({max_conductor})"
    )]
    Coverage { ns_bound: BigInt, max_conductor: u64 },

    #[error("network error fetching {url}: {reason}")]
    Network { url: String, reason: String },

    #[error("digest mismatch for cached file {}", file.display())]
    DigestMismatch { file: PathBuf },

    #[error("cache covers conductors up to {covered}, requested up to {requested}")]
    PartialCoverage { covered: u64, requested: u64 },

    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed manifest {}: {reason}", path.display())]
    Manifest { path: PathBuf, reason: String },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Usage(_) => ErrorClass::Usage,
            Error::Parse { .. }
            | Error::Coverage { .. }
            | Error::Network { .. }
            | Error::DigestMismatch { .. }
            | Error::PartialCoverage { .. }
            | Error::Io { .. }
            | Error::Manifest { .. } => ErrorClass::Data,
            Error::Domain(_) | Error::Singular | Error::NotSmooth { .. } | Error::Invariant(_) => {
                ErrorClass::Domain
            }
        }
    }
}
