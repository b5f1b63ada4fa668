//! LTLf to DFA by formula progression, and DFA minimization.

mod dfa;
mod minimize;
mod progression;

use thiserror::Error;

pub use dfa::{build_dfa, Dfa, DfaJson, DEFAULT_PROP_CAP, STATE_CEILING};
pub use minimize::minimize;
pub use progression::{Progressor, ResidualId, MAX_FORMULA_PROPS};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomataError {
    #[error("{found} propositions exceed the explicit-alphabet cap of {cap}")]
    PropositionCapExceeded { found: usize, cap: usize },
    #[error("formula mentions {found} propositions, more than the supported {cap}")]
    TooManyPropositions { found: usize, cap: usize },
    #[error("alphabet over {0} propositions cannot be enumerated")]
    AlphabetTooLarge(usize),
    #[error("unknown proposition `{0}`")]
    UnknownProposition(String),
    #[error("construction for `{formula}` exceeded {ceiling} states")]
    StateCeiling { ceiling: usize, formula: String },
    #[error("malformed automaton")]
    Malformed,
}
