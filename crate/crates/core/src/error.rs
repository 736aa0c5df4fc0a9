use thiserror::Error;

use crate::arcs::ArcId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("unsupported signature {0}: no ideal triangulation")]
    UnsupportedSignature(String),

    #[error("unknown edge {0}")]
    UnknownEdge(usize),

    #[error("edge {0} is not flippable")]
    NotFlippable(usize),

    #[error("arc {0} does not occur in any enumerated triangulation")]
    ArcNotWitnessed(ArcId),

    #[error("unknown arc {0}")]
    UnknownArc(ArcId),

    #[error("enumeration exceeded the vertex cap of {cap}")]
    EnumerationDiverged { cap: usize },

    #[error("operation requires a full enumeration, found {0}")]
    ModeError(String),

    #[error("vertex {0} lies too close to the frontier for an exact answer")]
    FrontierVertex(usize),

    #[error("orientation of edge {0} could not be decided")]
    Undecidable(usize),

    #[error("surface {0} is outside the standing assumption F(S) >= 3")]
    OutsideStandingAssumption(String),

    #[error("polygonalisation is not contained in a known triangulation")]
    NoWitness,

    #[error("i/o error: {0}")]
    Io(String),

    #[error("malformed document: {0}")]
    Document(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Document(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
