use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("basis mismatch: expected [{expected}], found [{found}]")]
    BasisMismatch { expected: String, found: String },

    #[error("duplicate mode label `{0}` in basis")]
    DuplicateLabel(String),

    #[error("label `{0}` is not part of the basis")]
    UnknownLabel(String),

    #[error("cannot parse mode label `{0}`")]
    InvalidLabel(String),

    #[error("expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("zero vector has no outcome probabilities")]
    ZeroVector,

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("matrix is not a projector: {0}")]
    NotAProjector(String),

    #[error("projectors do not commute")]
    NonCommuting,

    #[error("map is not an isometry (max deviation {0:e})")]
    NotIsometric(f64),

    #[error("projector family is invalid: {0}")]
    InvalidFamily(String),

    #[error("conditioning event has zero probability")]
    ZeroProbabilityCondition,

    #[error("post-selection incompatible with pre-selection (ABL denominator {0:e})")]
    PostSelectionIncompatible(f64),

    #[error("projector is not legal at stage {stage}: {reason}")]
    IllegalProjector { stage: String, reason: String },

    #[error("unknown experiment stage `{0}`")]
    UnknownStage(String),

    #[error("cannot parse observable `{0}`")]
    InvalidObservable(String),

    #[error("boost velocity must satisfy |beta| < 1, got {0}")]
    InvalidBoost(f64),

    #[error("criterion ER1 needs a reference frame")]
    MissingFrame,

    #[error("at least one apex event is required")]
    EmptyApexes,

    #[error("observable `{observable}` has no element of reality in frame `{frame}`")]
    MissingObservable { frame: String, observable: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {found} outside supported range {min}..={max}")]
    DimensionOutOfRange {
        found: usize,
        min: usize,
        max: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("operator is not a projector (spectrum must be 0/1)")]
    NotAProjectorSpectrum,

    #[error("derivation trace is only defined for the constant-one and single-index cases")]
    UnsupportedCase,

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
}
