use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::CohomologyError;
use crate::algebra::IntMatrix;
use crate::group::FiniteGroup;

/// `Z^r` (or a quotient `Z^r / diag(moduli)`) with a left action of a finite
/// group given by one integer matrix per element.
#[derive(Clone, Debug, PartialEq)]
pub struct GModule {
    group: FiniteGroup,
    rank: usize,
    action: Vec<IntMatrix>,
    /// Per-coordinate modulus; `0` means that coordinate is free. Empty for lattices.
    moduli: Vec<BigInt>,
}

impl GModule {
    /// A lattice `Z^r` with the given action. Checks that the matrices form a
    /// representation.
    pub fn lattice(group: &FiniteGroup, action: Vec<IntMatrix>) -> Result<Self, CohomologyError> {
        let rank = action.first().map_or(0, IntMatrix::rows);
        Self::build(group, rank, action, Vec::new())
    }

    /// A finite or mixed module `Z^r / diag(moduli)`. A modulus of `0` keeps the
    /// coordinate free; `1` kills it.
    pub fn with_moduli(group: &FiniteGroup, action: Vec<IntMatrix>, moduli: Vec<BigInt>) -> Result<Self, CohomologyError> {
        let rank = moduli.len();
        Self::build(group, rank, action, moduli)
    }

    /// `Z^r` with trivial action.
    pub fn trivial(group: &FiniteGroup, rank: usize) -> Self {
        GModule {
            group: group.clone(),
            rank,
            action: vec![IntMatrix::identity(rank); group.order()],
            moduli: Vec::new(),
        }
    }

    fn build(group: &FiniteGroup, rank: usize, action: Vec<IntMatrix>, moduli: Vec<BigInt>) -> Result<Self, CohomologyError> {
        if action.len() != group.order() {
            return Err(CohomologyError::InvalidModule(format!(
                "expected {} action matrices, found {}",
                group.order(),
                action.len()
            )));
        }
        if let Some((g, a)) = action.iter().enumerate().find(|(_, a)| a.rows() != rank || a.cols() != rank) {
            return Err(CohomologyError::InvalidModule(format!(
                "action of element {g} is {}x{}, expected {rank}x{rank}",
                a.rows(),
                a.cols()
            )));
        }
        if moduli.iter().any(|m| m < &BigInt::zero()) {
            return Err(CohomologyError::InvalidModule("negative modulus".into()));
        }
        let m = GModule { group: group.clone(), rank, action, moduli };
        // each matrix must preserve the relation lattice
        for (g, a) in m.action.iter().enumerate() {
            for i in 0..rank {
                for j in 0..rank {
                    let qj = m.modulus(j);
                    if qj.is_zero() {
                        continue;
                    }
                    if !m.reduce_component(i, &(a.get(i, j) * &qj)).is_zero() {
                        return Err(CohomologyError::InvalidModule(format!(
                            "action of element {g} does not preserve the relations"
                        )));
                    }
                }
            }
        }
        if !m.equal_mod(&m.action[group.identity()], &IntMatrix::identity(rank)) {
            return Err(CohomologyError::InvalidModule("identity does not act trivially".into()));
        }
        for a in group.elements() {
            for b in group.elements() {
                let prod = &m.action[a] * &m.action[b];
                if !m.equal_mod(&prod, &m.action[group.mul(a, b)]) {
                    return Err(CohomologyError::InvalidModule(format!(
                        "action is not a homomorphism at ({}, {})",
                        group.element_key(a),
                        group.element_key(b)
                    )));
                }
            }
        }
        Ok(m)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn action(&self, g: usize) -> &IntMatrix {
        &self.action[g]
    }

    pub fn is_lattice(&self) -> bool {
        self.moduli.iter().all(Zero::is_zero)
    }

    pub fn modulus(&self, i: usize) -> BigInt {
        self.moduli.get(i).cloned().unwrap_or_default()
    }

    fn reduce_component(&self, i: usize, x: &BigInt) -> BigInt {
        let q = self.modulus(i);
        if q.is_zero() {
            x.clone()
        } else {
            x.mod_floor(&q)
        }
    }

    /// Reduces an element into canonical representatives.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        v.iter().enumerate().map(|(i, x)| self.reduce_component(i, x)).collect()
    }

    fn equal_mod(&self, a: &IntMatrix, b: &IntMatrix) -> bool {
        (0..self.rank).all(|i| (0..self.rank).all(|j| self.reduce_component(i, &(a.get(i, j) - b.get(i, j))).is_zero()))
    }

    /// `Hom(M, Z)` with `g` acting by the inverse transpose. Lattices only.
    pub fn dual(&self) -> Result<GModule, CohomologyError> {
        if !self.is_lattice() {
            return Err(CohomologyError::InvalidModule("dual of a module with torsion".into()));
        }
        let action = self.group.elements().map(|g| self.action[self.group.inv(g)].transpose()).collect();
        Ok(GModule { group: self.group.clone(), rank: self.rank, action, moduli: Vec::new() })
    }

    /// Apply `g` to an element.
    pub fn act(&self, g: usize, v: &[BigInt]) -> Vec<BigInt> {
        self.action[g].mul_vec(v)
    }
}
