//! Weight quasimorphisms of group actions on graphs, and explicit certificates
//! for the vanishing of cup products and Massey triple products with their
//! coboundary classes in equivariant bounded cohomology.
//!
//! The crate is organised bottom-up:
//!
//! * [`words`]: free groups as reduced words, balls, and the Cayley tree.
//! * [`graph`]: paths, oriented edges, ℓ-fragments, finite graphs, medians and
//!   group actions by graph automorphisms.
//! * [`coherent`]: path families with the quasi-median property and the
//!   fragment bijections Φ.
//! * [`weights`]: ℓ-weights, weight quasimorphisms, defects and the triangle
//!   estimate `3(R+1)·c·‖W‖∞·‖τ‖∞`.
//! * [`cochain`]: invariant cochains as closed evaluators with coboundary, cup
//!   product, hat-lifts and orbit pullbacks.
//! * [`vanishing`]: the primitives η, ν, κ, β, β′ and their certificates.
//! * [`brooks_delta`]: Brooks and Δ-decomposable quasimorphisms on free groups.
//! * [`median`]: halfspaces of median graphs, ℋ-segments, staircases and
//!   median quasimorphisms.
//!
//! Every supremum over an infinite vertex set is replaced by an exhaustive or
//! seeded-sampled supremum over a finite domain (a ball or a finite complex).

pub mod brooks_delta;
pub mod coherent;
pub mod cochain;
pub mod graph;
pub mod median;
pub mod report;
pub mod sampling;
pub mod vanishing;
pub mod weights;
pub mod words;

pub use graph::{Fragment, OrientedEdge, Path, Vertex};
pub use report::{CheckEntry, Status};
pub use words::{Alphabet, ReducedWord};
