//! Lattice models of site-specific recombination on circular DNA.
//!
//! Knotted conformations are sampled as self-avoiding polygons on the cubic
//! lattice, reconnected at pairs of nearby edges (band surgery), and the
//! products are identified by their HOMFLY-PT polynomial. A separate set of
//! decision procedures tells whether a single banding between two knot
//! types is ruled out by classical invariants.

pub mod diagram;
pub mod error;
pub mod invariants;
pub mod knot_table;
pub mod lattice;
pub mod obstructions;
pub mod reconnection;
pub mod stats;
