use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("chart dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("jets of order {needed} requested but only {available} available")]
    JetsUnavailable { needed: usize, available: usize },
    #[error("point {0:?} lies outside the field domain")]
    OutsideDomain(Vec<f64>),
    #[error("invalid cutoff radii: inner {inner}, outer {outer}")]
    InvalidRadii { inner: f64, outer: f64 },
    #[error("regular representation of size {size} exceeds the cap {cap}")]
    DimensionCap { size: usize, cap: usize },
    #[error("nilpotent part has a nonzero degree-0 component")]
    DegreeZeroPart,
    #[error("matrix is not Hermitian (defect {0:e})")]
    NotHermitian(f64),
    #[error("zero clearance at {0:?}: beta is not defined there")]
    Clearance(Vec<f64>),
    #[error("cutoff is not locally constant near the support at {0:?}")]
    NotFlatNearSupport(Vec<f64>),
    #[error("algebra tag mismatch")]
    TagMismatch,
    #[error("element is not of degree 2")]
    WrongDegree,
    #[error("wrong parity: {0}")]
    WrongParity(&'static str),
    #[error("connection matrix is not antisymmetric (defect {0:e})")]
    NotAntisymmetric(f64),
    #[error("index sets do not partition 1..={d}")]
    NotPartition { d: usize },
    #[error("operation requires fiber dimension 2, got {0}")]
    UnsupportedRank(usize),
    #[error("selector value {0} outside [0, 1]")]
    SelectorRange(f64),
    #[error("invalid spinor representation: {0}")]
    InvalidSpinorRep(&'static str),
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error("unknown integration mode `{0}`")]
    UnknownMode(String),
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
