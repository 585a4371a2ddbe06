//! Rainbow coloring of random regular graphs.
//!
//! A library and CLI for sampling uniform random r-regular graphs via the
//! configuration model, coloring their edges with a distance-constrained
//! sequential random scheme over an O(log n) palette, and verifying rainbow
//! connectivity — exhaustively on small instances, by budgeted witness
//! search or a constructive ball-growing pipeline at scale. Includes exact
//! counting oracles for the d-ary-tree pair-counting bounds that drive the
//! leaf-matching step, and a seeded, reproducible experiment harness.

pub mod coloring;
pub mod genreg;
pub mod graph;
pub mod harness;
pub mod localstruct;
pub mod matching;
pub mod rcverify;
pub mod trees;

pub use coloring::EdgeColoring;
pub use graph::{EdgeId, Path, SimpleGraph, VertexId};
pub use localstruct::Params;
