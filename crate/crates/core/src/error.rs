use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the exact engine, the asymptotics helpers and the
/// simulator.
///
/// Every variant maps to a stable, greppable [`code`](Error::code) which the
/// CLI prints ahead of the human-readable message.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("sides must be at least 2 (got {0})")]
    InvalidSides(u64),
    #[error("rolls must be at least 1 (got {0})")]
    InvalidRolls(u32),
    #[error("single mode requires exactly 1 roll (got {0})")]
    SingleModeRolls(u32),
    #[error("operation requires {expected} mode, spec is {actual}")]
    ModeMismatch {
        expected: &'static str,
        actual: &'static str,
    },
    #[error("{0} mode has no asymptotic limit for E/s")]
    NoLimit(&'static str),
    #[error("outcome {outcome} out of range, valid outcomes are 1..={sides}")]
    OutcomeOutOfRange { outcome: u64, sides: u64 },
    #[error("sample space of {points} points exceeds the work bound of {bound}")]
    WorkBoundExceeded { points: String, bound: u128 },
    #[error("empty sides schedule")]
    EmptySchedule,
    #[error("sides schedule must be strictly increasing with entries >= 2")]
    InvalidSchedule,
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("counts cover {got} outcomes but the spec has {sides} sides")]
    CountsLength { got: usize, sides: u64 },
    #[error("simulation spec does not match the exact pmf spec")]
    SpecMismatch,
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidSides(_) => "E_SIDES",
            Error::InvalidRolls(_) | Error::SingleModeRolls(_) => "E_ROLLS",
            Error::ModeMismatch { .. } | Error::NoLimit(_) => "E_MODE",
            Error::OutcomeOutOfRange { .. } => "E_OUTCOME",
            Error::WorkBoundExceeded { .. } => "E_WORK_BOUND",
            Error::EmptySchedule | Error::InvalidSchedule => "E_SCHEDULE",
            Error::NoTrials => "E_TRIALS",
            Error::CountsLength { .. } | Error::SpecMismatch => "E_SPEC_MISMATCH",
        }
    }
}
