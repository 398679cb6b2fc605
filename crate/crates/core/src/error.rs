use thiserror::Error;

use crate::formula::Step;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("atom index must be at least 1")]
    ZeroAtom,

    #[error("malformed atom `{0}`")]
    BadAtom(String),

    #[error("syntax error at byte {offset}: expected one of {}", expected.join(", "))]
    Syntax { offset: usize, expected: Vec<String> },

    #[error("path {path} is invalid: step {position} (`{step}`) does not exist")]
    InvalidPath { path: String, position: usize, step: Step },

    #[error("malformed lericone sequence `{0}`")]
    BadSequence(String),

    #[error("sequence `{0}` contains c, but a c-free sequence is required")]
    NotLrn(String),

    #[error("{what} needs {needed} keys, above the cap of {cap}; try the skeleton method or raise --cap")]
    Capacity { what: &'static str, needed: usize, cap: usize },

    #[error("substitutions use different keying ({0} vs {1})")]
    KeyingMismatch(&'static str, &'static str),

    #[error("expected an implication, found `{0}`")]
    NotImplication(String),

    #[error("antecedent and consequent share atom p{atom} (antecedent {antecedent}, consequent {consequent})")]
    SharedAtom { atom: String, antecedent: String, consequent: String },

    #[error("substitution is not faithful: {0}")]
    NotFaithful(String),

    #[error("proof line {line}: {message}")]
    Proof { line: usize, message: String },

    #[error("internal check failed: {0}")]
    Internal(String),

    #[error("bad input: {0}")]
    Input(String),
}

impl Error {
    /// Moves a syntax error offset by `by` bytes, for errors raised on a slice.
    pub fn shifted(self, by: usize) -> Error {
        match self {
            Error::Syntax { offset, expected } => Error::Syntax { offset: offset + by, expected },
            other => other,
        }
    }
}
