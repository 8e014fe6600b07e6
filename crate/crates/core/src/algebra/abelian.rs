//! Finitely generated abelian groups in invariant-factor form.
//!
//! Every group produced from a presentation keeps a witness: the linear map
//! from presentation coordinates to normal-form coordinates, and a lift of
//! each normal-form generator back to the presentation. Elements are then
//! compared by their normal-form coordinates.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::lattice::{integer_kernel, solve_integer};
use super::matrix::{IntMatrix, IntVector};
use super::snf::{smith_invariants, smith_normal_form};
use super::AlgebraError;

/// `Z^free_rank + Z/d_1 + ... + Z/d_k` with `d_1 | d_2 | ... | d_k`, `d_i >= 2`.
///
/// Normal-form coordinates list the torsion components first (each reduced
/// into `[0, d_i)`), then the free components.
#[derive(Clone, Debug)]
pub struct FgAbelianGroup {
    free_rank: usize,
    torsion: Vec<BigInt>,
    witness: Option<Witness>,
}

/// Maps between an ambient presentation `Z^n` and normal-form coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    /// `(#generators) x n`: presentation vector to normal-form coordinates.
    pub to_normal: IntMatrix,
    /// `n x (#generators)`: column `i` represents normal-form generator `i`.
    pub lifts: IntMatrix,
}

impl PartialEq for FgAbelianGroup {
    /// Isomorphism type only; witnesses are ignored.
    fn eq(&self, other: &Self) -> bool {
        self.free_rank == other.free_rank && self.torsion == other.torsion
    }
}

impl Eq for FgAbelianGroup {}

impl FgAbelianGroup {
    pub fn trivial() -> Self {
        FgAbelianGroup { free_rank: 0, torsion: Vec::new(), witness: None }
    }

    pub fn free(rank: usize) -> Self {
        FgAbelianGroup { free_rank: rank, torsion: Vec::new(), witness: None }
    }

    /// Normalizes an arbitrary list of cyclic orders (`0` meaning `Z`, `1`
    /// meaning trivial) into invariant-factor form.
    pub fn from_cyclic_orders(orders: &[BigInt]) -> Self {
        let d = IntMatrix::diagonal(orders);
        let inv = smith_invariants(&d);
        Self::from_diagonal(&inv, orders.len())
    }

    /// From a Smith diagonal of a presentation with `n` generators.
    fn from_diagonal(diag: &[BigInt], n: usize) -> Self {
        let torsion: Vec<BigInt> = diag.iter().filter(|d| **d > BigInt::one()).cloned().collect();
        let zeros = diag.iter().filter(|d| d.is_zero()).count();
        FgAbelianGroup { free_rank: zeros + n.saturating_sub(diag.len()), torsion, witness: None }
    }

    /// `Z^rows / A Z^cols`, with a witness relative to `Z^rows`.
    pub fn cokernel(a: &IntMatrix) -> Self {
        let s = smith_normal_form(a);
        let n = a.rows();
        let factor = |i: usize| s.invariant_factors.get(i).cloned().unwrap_or_default();
        let mut tors_pos = Vec::new();
        let mut free_pos = Vec::new();
        for i in 0..n {
            let d = factor(i);
            if d.is_zero() {
                free_pos.push(i);
            } else if d > BigInt::one() {
                tors_pos.push(i);
            }
        }
        let torsion = tors_pos.iter().map(|&i| factor(i)).collect();
        let positions: Vec<usize> = tors_pos.iter().chain(&free_pos).copied().collect();
        let all: Vec<usize> = (0..n).collect();
        let witness = Witness {
            to_normal: s.u.select(&positions, &all),
            lifts: s.u_inv.select(&all, &positions),
        };
        FgAbelianGroup { free_rank: free_pos.len(), torsion, witness: Some(witness) }
    }

    /// Isomorphism type of `Z^rows / A Z^cols` without computing a witness.
    pub fn cokernel_type(a: &IntMatrix) -> Self {
        Self::from_diagonal(&smith_invariants(a), a.rows())
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn witness(&self) -> Option<&Witness> {
        self.witness.as_ref()
    }

    /// Number of normal-form generators.
    pub fn num_generators(&self) -> usize {
        self.torsion.len() + self.free_rank
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }

    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion_order())
    }

    /// Exponent of the torsion subgroup (1 when torsion-free).
    pub fn torsion_exponent(&self) -> BigInt {
        self.torsion.last().cloned().unwrap_or_else(BigInt::one)
    }

    pub fn torsion_subgroup(&self) -> FgAbelianGroup {
        let t = self.torsion.len();
        let witness = self.witness.as_ref().map(|w| {
            let rows: Vec<usize> = (0..t).collect();
            let ambient: Vec<usize> = (0..w.to_normal.cols()).collect();
            Witness { to_normal: w.to_normal.select(&rows, &ambient), lifts: w.lifts.select(&ambient, &rows) }
        });
        FgAbelianGroup { free_rank: 0, torsion: self.torsion.clone(), witness }
    }

    /// Modulus of coordinate `i`: `d_i` for torsion, `0` for free.
    pub fn modulus(&self, i: usize) -> BigInt {
        self.torsion.get(i).cloned().unwrap_or_default()
    }

    /// Reduces torsion components into `[0, d_i)`.
    pub fn normalize(&self, coords: &[BigInt]) -> IntVector {
        coords
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let m = self.modulus(i);
                if m.is_zero() {
                    c.clone()
                } else {
                    c.mod_floor(&m)
                }
            })
            .collect()
    }

    pub fn is_zero_element(&self, coords: &[BigInt]) -> bool {
        self.normalize(coords).iter().all(Zero::is_zero)
    }

    /// Normal-form coordinates of a presentation vector.
    pub fn coordinates(&self, ambient: &[BigInt]) -> Result<IntVector, AlgebraError> {
        let w = self.witness.as_ref().ok_or(AlgebraError::MissingWitness)?;
        if ambient.len() != w.to_normal.cols() {
            return Err(AlgebraError::DimensionMismatch { expected: w.to_normal.cols(), found: ambient.len() });
        }
        Ok(self.normalize(&w.to_normal.mul_vec(ambient)))
    }

    /// A presentation vector representing the given coordinates.
    pub fn lift(&self, coords: &[BigInt]) -> Result<IntVector, AlgebraError> {
        let w = self.witness.as_ref().ok_or(AlgebraError::MissingWitness)?;
        if coords.len() != w.lifts.cols() {
            return Err(AlgebraError::DimensionMismatch { expected: w.lifts.cols(), found: coords.len() });
        }
        Ok(w.lifts.mul_vec(coords))
    }

    /// Invariant factor list with free summands as zeros, e.g. `[2, 2, 0]`.
    pub fn invariant_list(&self) -> Vec<BigInt> {
        let mut v = self.torsion.clone();
        v.extend(std::iter::repeat_n(BigInt::zero(), self.free_rank));
        v
    }

    pub fn same_type(&self, other: &FgAbelianGroup) -> bool {
        self == other
    }

    /// Relation matrix `[generators | diag(torsion)]` in normal-form coordinates.
    fn relation_block(&self, gens: &[IntVector]) -> IntMatrix {
        let k = self.num_generators();
        let t = self.torsion.len();
        let mut cols: Vec<IntVector> = gens.to_vec();
        for i in 0..t {
            let mut c = vec![BigInt::zero(); k];
            c[i] = self.torsion[i].clone();
            cols.push(c);
        }
        IntMatrix::from_columns(k, &cols)
    }

    /// Subgroup generated by elements given in normal-form coordinates.
    pub fn subgroup(&self, generators: &[IntVector]) -> Result<Subgroup, AlgebraError> {
        let k = self.num_generators();
        for g in generators {
            if g.len() != k {
                return Err(AlgebraError::DimensionMismatch { expected: k, found: g.len() });
            }
        }
        let gens: Vec<IntVector> = generators.iter().map(|g| self.normalize(g)).collect();
        let block = self.relation_block(&gens);
        let s = gens.len();
        // relations among the generators: kernel of the block, projected
        let ker = integer_kernel(&block);
        let rows: Vec<usize> = (0..s).collect();
        let cols: Vec<usize> = (0..ker.cols()).collect();
        let relations = ker.select(&rows, &cols);
        let as_group = FgAbelianGroup::cokernel(&relations);
        let quotient = FgAbelianGroup::cokernel(&block);
        Ok(Subgroup { ambient: self.clone(), generators: gens, block, as_group, quotient })
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = Vec::new();
        if self.free_rank == 1 {
            parts.push("Z".into());
        } else if self.free_rank > 1 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let d = &self.torsion[i];
            let run = self.torsion[i..].iter().take_while(|x| *x == d).count();
            if run == 1 {
                parts.push(format!("Z/{d}"));
            } else {
                parts.push(format!("(Z/{d})^{run}"));
            }
            i += run;
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Subgroup of an [`FgAbelianGroup`] spanned by explicit elements.
#[derive(Clone, Debug)]
pub struct Subgroup {
    ambient: FgAbelianGroup,
    generators: Vec<IntVector>,
    block: IntMatrix,
    as_group: FgAbelianGroup,
    quotient: FgAbelianGroup,
}

impl Subgroup {
    pub fn generators(&self) -> &[IntVector] {
        &self.generators
    }

    /// Isomorphism type of the subgroup itself.
    pub fn as_group(&self) -> &FgAbelianGroup {
        &self.as_group
    }

    /// The quotient of the ambient group by this subgroup.
    pub fn quotient(&self) -> &FgAbelianGroup {
        &self.quotient
    }

    pub fn is_everything(&self) -> bool {
        self.quotient.is_trivial()
    }

    pub fn is_trivial(&self) -> bool {
        self.as_group.is_trivial()
    }

    /// Membership of an ambient element given in normal-form coordinates.
    pub fn contains(&self, coords: &[BigInt]) -> Result<bool, AlgebraError> {
        let k = self.ambient.num_generators();
        if coords.len() != k {
            return Err(AlgebraError::DimensionMismatch { expected: k, found: coords.len() });
        }
        if k == 0 {
            return Ok(true);
        }
        let x = self.ambient.normalize(coords);
        if x.iter().all(Zero::is_zero) {
            return Ok(true);
        }
        Ok(solve_integer(&self.block, &x)?.is_some())
    }

    /// Coefficients expressing an element through the generators, if it lies
    /// in the subgroup.
    pub fn express(&self, coords: &[BigInt]) -> Result<Option<IntVector>, AlgebraError> {
        let x = self.ambient.normalize(coords);
        Ok(solve_integer(&self.block, &x)?.map(|sol| sol[..self.generators.len()].to_vec()))
    }
}

/// Greatest common divisor of a list, non-negative.
pub fn gcd_all<'a>(xs: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    xs.into_iter().fold(BigInt::zero(), |acc, x| acc.gcd(x)).abs()
}
