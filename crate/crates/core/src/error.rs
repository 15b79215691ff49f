use thiserror::Error;

use crate::catalog::{StageId, TileType};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("malformed rational {0:?}")]
    Rational(String),
    #[error("{file}:{line}: {msg}")]
    Record {
        file: String,
        line: usize,
        msg: String,
    },
}

/// Errors raised by the engine. Value-like outcomes (degenerate wedges,
/// forbidden tests) are returned as data, not through this type.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("catalog validation failed: {0}")]
    Catalog(String),

    #[error("isometry is not in the normalizer N(Q): {0}")]
    NotInNormalizer(String),

    #[error("degenerate body: all vertices are coplanar")]
    DegenerateBody,

    #[error("initial population check failed: {0}")]
    PopulationInvariantViolation(String),

    #[error("stage {stage} is not applicable to group {group}")]
    StageNotApplicable { group: String, stage: StageId },

    #[error("unknown group {0:?}")]
    UnknownGroup(String),

    #[error("base point has a non-trivial stabilizer (orbit points {0} and {1} coincide)")]
    StabilizerDetected(usize, usize),

    #[error("orbit cutoff radius {radius} too small for the cell around the base point")]
    CutoffTooSmall { radius: f64 },

    #[error("bound violated for {group}, prototile {prototile:?}: {detail}")]
    BoundViolated {
        group: String,
        prototile: TileType,
        detail: String,
    },

    #[error("nothing to export")]
    ExportEmpty,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
