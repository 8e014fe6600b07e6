//! Group cohomology `H^n(G, M)` of a finite group with coefficients in a
//! lattice or a finite quotient of one, via the inhomogeneous bar complex.

mod cochain;
mod groups;
mod module;
mod oracle;
mod products;

use thiserror::Error;

use crate::algebra::AlgebraError;

pub use cochain::{coboundary, differential_matrix, is_cocycle, BarCochain, MAX_DEGREE, MAX_DIFFERENTIAL_ENTRIES};
pub use groups::{
    cohomology, cohomology_type, cohomology_via_kernel, differentials_compose_to_zero, CohomologyClass,
    CohomologyGroup,
};
pub use module::GModule;
pub use oracle::{cyclic_cohomology_oracle, CyclicCohomology};
pub use products::{bockstein, cup_with_extension, pair_with_invariant, ExtensionClass};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CohomologyError {
    #[error("invalid module: {0}")]
    InvalidModule(String),
    #[error("differential in degree {degree} would need {entries} entries, over the size budget")]
    SizeBudget { degree: usize, entries: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("degree {0} out of range")]
    DegreeOutOfRange(usize),
    #[error("group is not cyclic")]
    NotCyclic,
    #[error("cochain is not a cocycle")]
    NotACocycle,
    #[error("{0} is not invariant under the group")]
    NotInvariant(&'static str),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[cfg(test)]
mod tests;
