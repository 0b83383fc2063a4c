//! Exact combinatorics for the odd graph family.
//!
//! The library constructs odd graphs, their bipartite doubles, and the folded
//! doubles obtained by adding the antipodal perfect matching, then computes
//! distance structure, equitable quotients, exact integer spectra, and
//! symmetry groups. Everything is integer-exact and deterministic; no floating
//! point is used anywhere.

#![forbid(unsafe_code)]

pub mod claims;
pub mod drg;
pub mod graph;
pub mod linalg;
pub mod partition;
pub mod symmetry;
