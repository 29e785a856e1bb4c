use thiserror::Error;

use crate::graph::AngleTriple;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("points are coincident (distance {distance:e} below tolerance)")]
    CoincidentPoints { distance: f64 },
    #[error("vertices {i} and {j} are coincident")]
    CoincidentVertices { i: usize, j: usize },
    #[error("vertex {vertex} is out of range 1..={n}")]
    InvalidVertex { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("triple {0} is not a valid angle index for the host graph")]
    InvalidTriple(AngleTriple),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("no path between {0} and {1}")]
    NoPath(usize, usize),
    #[error("configuration length {config} does not match vertex count {n}")]
    DimensionMismatch { n: usize, config: usize },
    #[error("configuration contains a non-finite coordinate")]
    NonFiniteConfiguration,
    #[error("configuration is degenerate (all points on a common line)")]
    DegenerateConfiguration,
    #[error("framework is not infinitesimally signed-angle rigid (rank {rank}, need {expected})")]
    NotIsar { rank: usize, expected: usize },
    #[error("graph is not a Laman graph")]
    NotLaman,
    #[error("angle index set is not angle connected")]
    NotAngleConnected,
    #[error("no signed angle supplied for triple {0}")]
    MissingAngle(AngleTriple),
    #[error("vertex {vertex} has degree {degree}; at least 2 required")]
    DegreeTooLow { vertex: usize, degree: usize },
    #[error("no two anchors are adjacent")]
    NoAdjacentAnchors,
    #[error("network is not signed-angle localizable: {0}")]
    NotLocalizable(String),
    #[error("assumption violated: {0}")]
    AssumptionViolated(String),
    #[error("agents {i} and {j} collided at t = {t}")]
    Collision { i: usize, j: usize, t: f64 },
    #[error("non-finite or divergent value encountered: {0}")]
    NonFinite(String),
    #[error("at least {needed} points required for a fit, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
