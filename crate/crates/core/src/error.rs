use thiserror::Error;

/// Errors raised by structure, lattice, field, measure and random-variable operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpError {
    #[error("malformed input: {0}")]
    Parse(String),

    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("points do not form an ortho-set: {0}")]
    NotOrthoSet(String),

    #[error("boundedness violated: s(x, A) = {value} exceeds 1")]
    BoundednessViolated { value: f64 },

    #[error("projection undefined: point is orthogonal to the subspace")]
    OrthogonalProjectionUndefined,

    #[error("projection onto the empty subspace")]
    EmptySubspace,

    #[error("no point of the subspace attains s(x, B) = {target}")]
    ProjectionMissing { target: f64 },

    #[error("no basis completion found ({})", if *.exhausted { "search space exhausted" } else { "budget exhausted" })]
    CompletionNotFound { exhausted: bool },

    #[error("explicit structure with {points} points needs a sampling budget (exhaustive limit is {limit})")]
    BudgetRequired { points: usize, limit: usize },

    #[error(
        "explicit structure with {points} points exceeds the subspace enumeration limit of {limit}"
    )]
    EnumerationTooLarge { points: usize, limit: usize },

    #[error("point set is not a subspace: {0}")]
    NotASubspace(String),

    #[error("operands belong to different structures")]
    MixedStructures,

    #[error("closure exceeded the cap of {cap} events")]
    ClosureCapExceeded { cap: usize },

    #[error("field has {events} events; triple enumeration is limited to {limit}")]
    TripleEnumerationTooLarge { events: usize, limit: usize },

    #[error("mixture weights are not convex: {0}")]
    WeightsNotConvex(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("event is not in the measure's domain")]
    EventNotInField,

    #[error("outcome events {0} and {1} are not orthogonal")]
    EventsNotOrthogonal(usize, usize),

    #[error("outcome events do not sum to the whole space")]
    DomainNotTotalOnBasis,

    #[error("outcome value {0} is not finite")]
    NonFiniteValue(f64),

    #[error("duplicate outcome value {0}")]
    DuplicateValue(f64),

    #[error("random variable has no value at this point")]
    ValueUndefinedAtPoint,

    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
}

pub type Result<T> = std::result::Result<T, SpError>;
