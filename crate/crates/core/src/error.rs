use thiserror::Error;

use crate::crn::Direction;
use crate::reach::Execution;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("reaction {reaction} is not applicable in direction {direction:?}")]
    NotApplicable { reaction: usize, direction: Direction },

    #[error("unknown species `{0}`")]
    UnknownSpecies(String),

    #[error("unknown reaction index {0}")]
    UnknownReaction(usize),

    #[error("invalid device: {0}")]
    Validation(String),

    #[error("start configuration holds {total} molecules, above the cap of {cap}")]
    CapUnreasonable { total: u64, cap: u64 },

    #[error("configuration is not a member of the reach set")]
    NotAMember,

    #[error("replay failed at step {step}: {reason}")]
    ReplayFailure { step: usize, reason: String },

    #[error("steps {index} and {} do not satisfy the commutation hypothesis (shared species `{species}`)", index + 1)]
    CommutationBlocked { index: usize, species: String },

    #[error("steps {0} and {next} are not a reaction followed by its inverse", next = .0 + 1)]
    NotAnInversePair(usize),

    #[error("step index {0} out of range")]
    StepOutOfRange(usize),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("no cancellable reverse/forward split pairing found")]
    PairingFailed { execution: Box<Execution> },

    #[error("modulus must be at least 2, got {0}")]
    BadModulus(i64),

    #[error("input arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{message}")]
    Io {
        kind: std::io::ErrorKind,
        message: String,
    },

    #[error("no expected output: device carries no oracle and none was supplied")]
    MissingOracle,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn io(e: std::io::Error) -> Self {
        Error::Io {
            kind: e.kind(),
            message: e.to_string(),
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
