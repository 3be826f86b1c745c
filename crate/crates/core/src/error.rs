use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("power {n} exceeds the configured bound {bound}")]
    PowerTooLarge { n: usize, bound: usize },
    #[error("power must be at least 1")]
    ZeroPower,
    #[error("invalid formal generator: {0}")]
    InvalidGenerator(String),
    #[error("invalid formal flow: {0}")]
    InvalidFlow(String),
    #[error("coordinate {0} is a moving coordinate of the rectangle")]
    MovingCoordinate(usize),
    #[error("flows are not composable: end of the first is not the start of the second")]
    NotComposable,
    #[error("flows share moving coordinates")]
    SharedCoordinates,
    #[error("composite domain has {found} decompositions, expected 2")]
    DecompositionCountMismatch { found: usize },
    #[error("GF(2) system is inconsistent ({0})")]
    InconsistentSystem(String),
    #[error("solution space has dimension {found}, expected {expected}")]
    DimensionMismatch { found: usize, expected: usize },
    #[error("power mismatch: expected {expected}, got {found}")]
    PowerMismatch { expected: usize, found: usize },
    #[error("scope mismatch: {0}")]
    ScopeMismatch(String),
    #[error("sign data are not gauge equivalent: {0}")]
    NotEquivalent(String),
    #[error("bad diagram: {0}")]
    BadDiagram(String),
    #[error("flow does not belong to the diagram: {0}")]
    FlowNotInDiagram(String),
    #[error("differential does not square to zero: {0}")]
    DifferentialNotSquareZero(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
