use thiserror::Error;

/// Crate-wide error type. Geometric predicates report degeneracies instead
/// of guessing; constructions report clearance or domain violations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degenerate contact: {0}")]
    DegenerateContact(String),

    #[error("degenerate hull: {0}")]
    DegenerateHull(String),

    #[error("repeated joint at index {0}")]
    RepeatedJoint(usize),

    #[error("bad pivot index {pivot} for chain with {joints} joints")]
    BadPivot { pivot: usize, joints: usize },

    #[error("construction clearance violated: {0}")]
    ConstructionClearance(String),

    #[error("parameter out of domain: {0}")]
    ParameterDomain(String),

    #[error("degenerate jag: {0}")]
    DegenerateJag(String),

    #[error("threading failure: {0}")]
    ThreadingFailure(String),

    #[error("middle bar does not pierce its target triangle")]
    NotPierced,

    #[error("scene is missing a chain with role {0}")]
    MissingRole(String),

    #[error("invalid move: {0}")]
    InvalidMove(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
