use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown builtin environment `{0}` (expected one of a3, a4, a4-detjump, two-basin)")]
    UnknownBuiltin(String),

    #[error("invalid environment: field `{field}`: {reason}")]
    Schema { field: String, reason: String },

    #[error("malformed environment document: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("{what} index {index} out of range (must be < {limit})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        limit: usize,
    },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("trajectory must start in state 0, found {0}")]
    BadInitialState(usize),

    #[error("trajectory is not replay-consistent at step {step}: expected state {expected}, found {found}")]
    ReplayInconsistent {
        step: usize,
        expected: usize,
        found: usize,
    },

    #[error(
        "trajectory step {step} moves from state {from} to {to}, which its action cannot produce"
    )]
    InfeasibleTransition { step: usize, from: usize, to: usize },

    #[error("operation requires a deterministic environment; `{0}` has stochastic transitions")]
    Stochastic(String),

    #[error("enumeration would produce {count} trajectories, exceeding the cap of {cap}")]
    CapExceeded { count: u128, cap: u128 },

    #[error("{0} must be non-empty")]
    Empty(&'static str),

    #[error("trajectory space is not a complete enumeration")]
    IncompleteSpace,

    #[error("rollout action sequence is absent from the reference space (horizon {horizon})")]
    NotInReference { horizon: usize },

    #[error("invalid policy: {0}")]
    InvalidPolicy(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("TEDI component {name} = {value} outside [0, 1]")]
    ComponentOutOfRange { name: &'static str, value: f64 },

    #[error("action frequencies are all zero")]
    ZeroFrequencies,

    #[error("invalid trajectory id {0}")]
    InvalidId(usize),

    #[error("invalid trap: {0}")]
    InvalidTrap(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn schema(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Schema {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// Environment definitions that failed to load or validate.
    pub fn is_invalid_spec(&self) -> bool {
        matches!(
            self,
            Error::UnknownBuiltin(_) | Error::Schema { .. } | Error::Parse(_)
        )
    }

    /// Requests that cannot be carried out on an otherwise valid input.
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            Error::Stochastic(_) | Error::CapExceeded { .. } | Error::IncompleteSpace
        )
    }
}
