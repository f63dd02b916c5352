use thiserror::Error;

use crate::meander::RegionId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid meander: {0}")]
    InvalidMeander(String),
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("enumeration cap exceeded: n = {n} > cap = {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("unknown region {0}")]
    UnknownRegion(RegionId),
    #[error("region {0} is not a leaf of its tree")]
    NotALeaf(RegionId),
    #[error("region {0} is a root")]
    LeafIsRoot(RegionId),
    #[error("leaf {leaf} has depth {depth}; transfers need depth >= 2")]
    LeafTooShallow { leaf: RegionId, depth: usize },
    #[error("target {target} is not at tree distance 2 from leaf {leaf}")]
    BadTarget { leaf: RegionId, target: RegionId },
    #[error("crossings bounding leaf {0} are not consecutive along the curve")]
    NotConsecutive(RegionId),
    #[error("plan replay failed at move {index}: {reason}")]
    Replay { index: usize, reason: String },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("mesh: {0}")]
    Mesh(String),
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("profile: {0}")]
    Profile(String),
    #[error("curve: {0}")]
    Curve(String),
    #[error("parse: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
