use serde_json::{json, Value};

use crate::scalars::Scalar;

use super::BraidWord;

/// Unnormalized bracket of the closure: crossings smoothed, virtual letters
/// as transpositions, every loop worth `d`.
pub fn bracket_closure(w: &BraidWord) -> Scalar {
    w.diagram().close().expect("braid diagrams are square")
}

/// The bracket with what a downstream normalization needs.
#[derive(Clone, Debug, PartialEq)]
pub struct BracketReport {
    pub value: Scalar,
    pub writhe: i64,
    pub strands: usize,
}

pub fn bracket_report(w: &BraidWord) -> BracketReport {
    BracketReport {
        value: bracket_closure(w),
        writhe: w.writhe(),
        strands: w.strands(),
    }
}

impl BracketReport {
    pub fn to_json(&self) -> Value {
        json!({
            "value": self.value.to_json(),
            "writhe": self.writhe,
            "strands": self.strands,
            "normalization": "none (unnormalized bracket, empty closure of n strands gives d^n)",
        })
    }
}
