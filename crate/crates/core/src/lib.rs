//! Spectral sparsification by effective-resistance sampling, with the
//! machinery to certify the result and exploit its sparsity.
//!
//! The pipeline a typical caller runs:
//!
//! 1. [`graph::MultiGraph`] holds a weighted undirected multigraph.
//! 2. [`resistance::resistance_table`] computes exact effective resistances
//!    from a dense Laplacian pseudoinverse and turns them into sampling
//!    probabilities.
//! 3. [`sampler::sample_sparsifier`] draws a reweighted multigraph `H`.
//! 4. [`spectral::relative_spectrum`] measures how closely `L_H` sandwiches `L_G`.
//! 5. [`forests::treelike_ordering`] and [`forests::decompose_forests`] split
//!    `H` into a small number of forests.
//! 6. [`cutquery::CutIndex`] answers cut-boundary queries for a vertex set `S`
//!    touching only `O(c * |S|)` adjacency entries.

pub mod cutquery;
pub mod error;
pub mod forests;
pub mod generate;
pub mod graph;
pub mod resistance;
pub mod sampler;
pub mod spectral;
pub mod textio;

pub use error::{Error, Result};
pub use graph::{Edge, MultiGraph, VertexId};
