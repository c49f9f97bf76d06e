//! Dynamic-graph algorithms built on algebraic walk counting: fully dynamic
//! hop-bounded distances, exact single-source shortest paths, approximate
//! all-pairs shortest paths with path reporting, and transitive closure.

pub mod algebra;
pub mod apsp;
pub mod collection;
pub mod dyninv;
pub mod graph;
pub mod hitting;
pub mod hopdist;
pub mod minplus;
pub mod reporting;
pub mod rng;
pub mod sssp;
pub mod tc;
