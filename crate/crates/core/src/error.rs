use thiserror::Error;

/// Errors raised by the analysis library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("dimension {requested} exceeds the configured cap of {cap}")]
    DimensionCap { requested: usize, cap: usize },

    #[error("invalid subsystem selection: {0}")]
    InvalidSubsystems(String),

    #[error("matrix is not Hermitian (max defect {defect:.3e})")]
    NotHermitian { defect: f64 },

    #[error("matrix is not unitary (max defect {defect:.3e})")]
    NotUnitary { defect: f64 },

    #[error("non-finite entry produced")]
    NonFinite,

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("invalid algorithm: {0}")]
    InvalidAlgorithm(String),

    #[error("{what} = {value} is outside the supported range {range}")]
    OutOfRange {
        what: &'static str,
        value: usize,
        range: String,
    },

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("not a subgroup: {0}")]
    NotASubgroup(String),

    #[error("invalid stage for this operation: {0}")]
    InvalidStage(String),

    #[error("states do not pairwise commute (max commutator norm {norm:.3e})")]
    NotCommuting { norm: f64 },

    #[error("numerical cross-check failed for {what}: {first} vs {second}")]
    CrossCheck {
        what: &'static str,
        first: f64,
        second: f64,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
