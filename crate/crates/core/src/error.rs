use thiserror::Error;

/// Validation and precondition failures for divides.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DivideError {
    #[error("NonQuadrivalent: crossing {index} has {degree} half-edges, expected 4")]
    NonQuadrivalent { index: usize, degree: usize },
    #[error("NonPlanar: rotation system closes to Euler characteristic {euler}, expected 2")]
    NonPlanar { euler: i64 },
    #[error("InconsistentStrands: edge ({0}, {1}) joins opposite slots of one crossing")]
    InconsistentStrands(u64, u64),
    #[error("DanglingHalfEdge: half-edge {0} is not covered by any edge")]
    DanglingHalfEdge(u64),
    #[error("UnknownHalfEdge: edge references undeclared half-edge {0}")]
    UnknownHalfEdge(u64),
    #[error("DuplicateHalfEdge: half-edge {0} appears more than once")]
    DuplicateHalfEdge(u64),
    #[error("Disconnected: the divide has {components} connected components")]
    Disconnected { components: usize },
    #[error("NotATriangle: region {0} is not a triangle with three distinct crossings")]
    NotATriangle(usize),
    #[error("BoundaryFace: region {0} touches the boundary of the disk")]
    BoundaryFace(usize),
    #[error("NotAnEndpoint: {0} is not a boundary endpoint of an interval branch")]
    NotAnEndpoint(usize),
    #[error("EmptyClosedBranch: a closed branch without crossings cannot be represented")]
    EmptyClosedBranch,
}

/// Failures of the Puiseux and cabling constructions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("NotCoprime: gcd({0}, {1}) != 1")]
    NotCoprime(u64, u64),
    #[error("InvalidPuiseux: {0}")]
    InvalidPuiseux(String),
    #[error("CircleBranch: cabling is undefined over an immersed circle")]
    CircleBranch,
    #[error("MultiBranch: cabling needs exactly one interval branch, found {0} branches")]
    MultiBranch(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Divide(#[from] DivideError),
}

/// Failures of the numeric curve tracer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TraceError {
    #[error("TangencyDetected: near-tangential approach at ({x:.6}, {y:.6})")]
    TangencyDetected { x: f64, y: f64 },
    #[error("TriplePoint: three branches meet near ({x:.6}, {y:.6})")]
    TriplePoint { x: f64, y: f64 },
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error(transparent)]
    Divide(#[from] DivideError),
}

/// Failures of the homology layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("IndexOutOfRange: basis index {index} >= {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("Inconclusive: no period up to {k_max} and no infinite-order certificate")]
    Inconclusive { k_max: u64 },
    #[error(transparent)]
    Divide(#[from] DivideError),
}

/// Failures of the SVG layout.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("LayoutDegenerate: {0}")]
    LayoutDegenerate(String),
    #[error("Unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Divide(#[from] DivideError),
}
