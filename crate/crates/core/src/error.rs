use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

/// Why a sequence stopped producing terms before the requested index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    /// The sequence is genuinely finite and has no more terms.
    Finite,
    /// A scan or materialization budget ran out before the next term was decided.
    Budget,
}

impl fmt::Display for Truncation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Truncation::Finite => f.write_str("sequence is finite"),
            Truncation::Budget => f.write_str("scan budget exhausted"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeqError {
    #[error("digit operation applied to negative value {0}")]
    NegativeBaseInput(BigInt),

    #[error("term {index} is {value}, which is not a valid index")]
    IndexOutOfDomain { index: BigInt, value: BigInt },

    #[error("index {0} is beyond the materialization limit")]
    IndexTooLarge(BigInt),

    #[error("operation requires a strictly increasing sequence; {0}")]
    NotStrictlyIncreasing(String),

    #[error("operation requires a non-decreasing sequence; {0}")]
    NotNonDecreasing(String),

    #[error("operation requires an unbounded sequence; {0}")]
    UnboundedRequired(String),

    #[error("value {0} is never attained")]
    ValueNotAttained(BigInt),

    #[error("term {index} is {value}; repetition counts must be non-negative")]
    NegativeCount { index: usize, value: BigInt },

    #[error("term {index} is {value}; operation requires non-negative terms")]
    NegativeTerm { index: usize, value: BigInt },

    #[error("the result set is empty")]
    EmptyResult,

    #[error("membership beyond {decided} decided terms needs more than {budget} source terms")]
    UndecidableFrontier { decided: usize, budget: usize },

    #[error("first term is {0}; a convolutional inverse needs first term 1")]
    NotInvertible(BigInt),

    #[error("a set image under a negative multiplier is unbounded below")]
    UnboundedBelow,

    #[error("certificate violated at term {index}: {detail}")]
    CertificateViolation { index: usize, detail: String },

    #[error("only {available} terms available ({kind})")]
    Truncated { available: usize, kind: Truncation },

    #[error("{message} (at {start}..{end})")]
    Staged {
        start: usize,
        end: usize,
        message: String,
    },
}

impl SeqError {
    /// A limit or a finite end stopped production. The terms before it are
    /// valid, so this is a visible partial result rather than a failure.
    pub fn is_truncation(&self) -> bool {
        matches!(
            self,
            SeqError::Truncated { .. }
                | SeqError::UndecidableFrontier { .. }
                | SeqError::IndexTooLarge(_)
        )
    }

    pub fn is_finite_end(&self) -> bool {
        matches!(
            self,
            SeqError::Truncated {
                kind: Truncation::Finite,
                ..
            }
        )
    }

    pub(crate) fn budget(available: usize) -> Self {
        SeqError::Truncated {
            available,
            kind: Truncation::Budget,
        }
    }
}

pub type Result<T, E = SeqError> = std::result::Result<T, E>;
