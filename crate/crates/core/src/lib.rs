//! Exact recoupling calculus for virtual braided fusion trees.

pub mod braidrep;
pub mod diagrams;
pub mod error;
pub mod linalg;
pub mod recoupling;
pub mod sampling;
pub mod scalars;
pub mod trees;

pub use error::{Error, Result};
pub use scalars::{constants, NamedConstants, Scalar};
