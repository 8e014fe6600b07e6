//! Exact scalar and matrix arithmetic: integers, rationals, cyclotomic
//! numbers, Smith normal form and finitely generated abelian groups.

pub mod abelian;
pub mod cyclotomic;
pub mod lattice;
pub mod matrix;
pub mod rational;
pub mod snf;

pub use abelian::{FgAbelianGroup, Subgroup, Witness};
pub use cyclotomic::CycloNumber;
pub use lattice::{integer_kernel, integer_left_kernel, solve_integer};
pub use matrix::{IntMatrix, IntVector, Matrix, RatMatrix, RatVector};
pub use rational::{format_rational, parse_rational, solve_rational};
pub use snf::{smith_invariants, smith_normal_form, SmithDecomposition};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("group carries no coordinate witness")]
    MissingWitness,
}
