//! Virtual braid words, their action on left-comb tree spaces, and bracket
//! evaluation of closures.

mod bracket;
mod rep;
mod word;

pub use bracket::{bracket_closure, bracket_report, BracketReport};
pub use rep::{
    check_relations, classical_rep_matrix, fibonacci_a, normalized_numeric, rep_matrix, unitarity_residual,
    ChannelMatrix, RelationCheck, RepMatrix, SectorAction,
};
pub use word::{BraidWord, Letter};
