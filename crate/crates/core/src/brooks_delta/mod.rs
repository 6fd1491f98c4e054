//! Free-group instances: Brooks counting quasimorphisms on the Cayley tree and
//! Δ-decomposable quasimorphisms on Cayley graphs with respect to pieces.

mod brooks;
mod delta;

pub use brooks::*;
pub use delta::*;
