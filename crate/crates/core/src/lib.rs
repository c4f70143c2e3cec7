//! Search machinery for multicolor Ramsey edge-colorings of complete graphs.
//!
//! The crate is organized around four layers:
//!
//! * [`graph`] — edge-colored complete graphs, degree matrices, weak
//!   isomorphism, canonical forms, and a brute-force enumeration oracle.
//! * [`model`] — solver-agnostic constraint models for Ramsey coloring
//!   problems (clique exclusion, degree fixing, lex symmetry breaking,
//!   circulant structure).
//! * [`cnf`] — CNF encoding of constraint models, DIMACS import/export, an
//!   embedded CDCL solver, an external-solver bridge, and all-solutions
//!   enumeration with blocking clauses.
//! * [`degseq`] — degree-sequence and degree-matrix combinatorics
//!   (graphicality, bounded enumeration, canonical lex forms).
//!
//! Vertices and colors are 1-indexed everywhere in the public API.

pub mod cnf;
pub mod degseq;
mod error;
pub mod graph;
pub mod model;

pub use error::Error;

/// Convenience alias used throughout the crate.
pub type Result<T, E = Error> = std::result::Result<T, E>;
