//! Partite hypergraph list coloring: structures, sufficient conditions,
//! a Moser–Tardos style solver and brute-force oracles.

pub mod conditions;
pub mod correspondence;
pub mod experiment;
pub mod generators;
pub mod hypergraph;
pub mod io;
pub mod lists;
pub mod oracle;
pub mod rng;
pub mod solver;

pub use hypergraph::{Edge, PartiteHypergraph, VertexId, VertexMap};
pub use lists::{Color, ListAssignment, PartialColoring};
