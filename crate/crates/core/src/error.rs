use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operation undefined on the empty set")]
    EmptySet,
    #[error("empty input")]
    EmptyInput,
    #[error("pointwise membership is not available at near-equal fidelity")]
    Fidelity,
    #[error("closure unsupported: a removed piece is full-dimensional in the carrier")]
    UnsupportedClosure,
    #[error("set is not nearly convex: {0}")]
    NotNearlyConvex(String),
    #[error("point does not belong to the set")]
    PointNotInSet,
    #[error("point does not belong to the graph")]
    PointNotInGraph,
    #[error("point does not belong to the domain")]
    PointNotInDomain,
    #[error("qualification condition fails: {0}")]
    QualificationFailed(String),
    #[error("malformed epigraph: {0}")]
    MalformedEpigraph(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::EmptySet => "EmptySet",
            Error::EmptyInput => "EmptyInput",
            Error::Fidelity => "FidelityError",
            Error::UnsupportedClosure => "UnsupportedClosure",
            Error::NotNearlyConvex(_) => "NotNearlyConvex",
            Error::PointNotInSet => "PointNotInSet",
            Error::PointNotInGraph => "PointNotInGraph",
            Error::PointNotInDomain => "PointNotInDomain",
            Error::QualificationFailed(_) => "QualificationFailed",
            Error::MalformedEpigraph(_) => "MalformedEpigraph",
            Error::Invariant(_) => "InvariantViolation",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
