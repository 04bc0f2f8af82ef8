use std::path::PathBuf;

use num_bigint::BigInt;
use thiserror::Error;

/// Errors produced anywhere in the engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("sequence length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("Dirichlet inverse needs a unit leading coefficient, found {0}")]
    NonUnitLead(BigInt),

    #[error("invalid zeta factor zeta({scale}s - {shift})")]
    InvalidFactor { scale: u32, shift: u32 },

    #[error("catalog: {0}")]
    Catalog(String),

    #[error("unknown group `{0}`")]
    UnknownGroup(String),

    #[error("brute-force enumeration does not support {0}")]
    UnsupportedPresentation(String),

    #[error("brute-force enumeration at n={n} would visit about {size:.3e} tuples (limit {limit:.1e})")]
    EnumerationTooLarge { n: usize, size: f64, limit: f64 },

    #[error("transitive count {transitive} at n={n} is not divisible by (n-1)!")]
    NotDivisible { n: usize, transitive: BigInt },

    #[error("coefficient table has {have} entries but {needed} are required")]
    InsufficientCoefficients { needed: usize, have: usize },

    #[error("polymer sum for n={n}, k={k} is not an integer: {value}")]
    NonIntegerPolymer { n: usize, k: usize, value: String },

    #[error("x must be positive, got {0}")]
    NonPositiveX(String),

    #[error("cannot parse `{0}` as a positive rational or decimal")]
    ParseScalar(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("series tail not certified at u={u}: table has {have} terms, about {needed} needed (extend N)")]
    TableTooShort { u: f64, have: usize, needed: usize },

    #[error("could not bracket the inverse of W_0 at w={w}")]
    BracketNotFound { w: f64 },

    #[error("quadrature did not converge with {nodes} nodes (last relative change {change:.3e})")]
    QuadratureNonConvergence { nodes: usize, change: f64 },

    #[error("cache file {}: {msg}", path.display())]
    Cache { path: PathBuf, msg: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of a numeric certificate (tail bound, bracketing, quadrature).
    pub fn is_certification(&self) -> bool {
        matches!(
            self,
            Error::TableTooShort { .. }
                | Error::BracketNotFound { .. }
                | Error::QuadratureNonConvergence { .. }
        )
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
