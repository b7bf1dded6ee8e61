use thiserror::Error;

use crate::geom::Point;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degenerate incidence at {0}")]
    DegenerateIncidence(Box<Point>),
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("invalid polyline: {0}")]
    InvalidPolyline(String),
    #[error("point {0} lies on a boundary")]
    OnBoundary(Box<Point>),
    #[error("point {0} is not in the requested face")]
    NotInFace(Box<Point>),
    #[error("duplicate identifier {0:?}")]
    DuplicateId(String),
    #[error("unknown identifier {0:?}")]
    UnknownId(String),
    #[error("lens {0} is not containment-minimal among empty lenses")]
    NotMinimal(String),
    #[error("lens {0} contains a point of S")]
    NotEmpty(String),
    #[error("lens removal failed: {0}")]
    ConstructionFailed(String),
    #[error("disk {0:?} has a trace of size < 2")]
    SmallTracePresent(String),
    #[error("disks {0:?} and {1:?} have equal traces but are not nested")]
    EqualTraceNotNested(String, String),
    #[error("no monotone path from {0} to the common point")]
    NoMonotonePath(Box<Point>),
    #[error("no witness disk for edge {0}-{1}")]
    NoWitnessDisk(String, String),
    #[error("no crossing-budget path for edge {0}-{1}")]
    BudgetSearchFailed(String, String),
    #[error("new curve crosses edge {0}-{1}, which is not incident to its endpoints")]
    ForeignEdgeCrossing(String, String),
    #[error("shadow offset exhausted for edge {0}-{1}")]
    OffsetExhausted(String, String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("generation exhausted after {0} attempts")]
    GenerationExhausted(usize),
    #[error("invalid instance: {0}")]
    Validation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
