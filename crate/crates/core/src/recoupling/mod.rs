//! The rewrite calculus on fusion trees.

pub mod certify;
pub mod channels;
pub mod engine;
pub mod leftassoc;
pub mod moves;
pub mod rulebook;

pub use leftassoc::{
    act_in_world, act_on_vector, left_associate, left_associate_detailed, Association, Associator, VirtualBraidedTree,
};
