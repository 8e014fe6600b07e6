//! Exact cohomological invariants of hyperelliptic manifolds `X = T/G`
//! presented by crystallographic data: a lattice with an integral action of a
//! finite group, rational translation parts and an optional complex structure.

pub mod algebra;
pub mod group;
pub mod cohomology;
pub mod crystal;
pub mod invariants;
pub mod io;
pub mod report;
pub mod gallery;
