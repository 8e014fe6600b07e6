//! Extension classes and the maps built from them: pairing with invariant
//! functionals, cup product with an `H^1` class, and the Bockstein of a
//! `Q/Z`-valued character.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use super::cochain::{is_cocycle, BarCochain};
use super::module::GModule;
use super::CohomologyError;
use crate::group::{FiniteGroup, QmodZCharacter};

/// A 2-cocycle with values in a lattice module.
#[derive(Clone, Debug)]
pub struct ExtensionClass {
    module: GModule,
    cocycle: BarCochain,
}

impl ExtensionClass {
    pub fn new(module: &GModule, cocycle: BarCochain) -> Result<Self, CohomologyError> {
        if cocycle.degree() != 2 {
            return Err(CohomologyError::DegreeOutOfRange(cocycle.degree()));
        }
        if !module.is_lattice() {
            return Err(CohomologyError::InvalidModule("extension by a module with torsion".into()));
        }
        if !is_cocycle(module, &cocycle)? {
            return Err(CohomologyError::NotACocycle);
        }
        Ok(ExtensionClass { module: module.clone(), cocycle })
    }

    pub fn module(&self) -> &GModule {
        &self.module
    }

    pub fn cocycle(&self) -> &BarCochain {
        &self.cocycle
    }
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `(g, h) -> phi(lambda(g, h))` for an invariant functional `phi`, a 2-cocycle
/// with trivial integer coefficients.
pub fn pair_with_invariant(ext: &ExtensionClass, phi: &[BigInt]) -> Result<BarCochain, CohomologyError> {
    let m = &ext.module;
    if phi.len() != m.rank() {
        return Err(CohomologyError::Dimension { expected: m.rank(), found: phi.len() });
    }
    if m.group().elements().any(|g| m.action(g).vec_mul(phi) != phi) {
        return Err(CohomologyError::NotInvariant("functional"));
    }
    let z = GModule::trivial(m.group(), 1);
    BarCochain::from_fn(&z, 2, |t| vec![dot(phi, ext.cocycle.at(t))])
}

/// `(f u lambda)(g1, g2, g3) = <f(g1), g1 . lambda(g2, g3)>` for a 1-cocycle
/// `f` with values in the dual module; a 3-cocycle with integer coefficients.
pub fn cup_with_extension(ext: &ExtensionClass, f: &BarCochain) -> Result<BarCochain, CohomologyError> {
    let m = &ext.module;
    let dual = m.dual()?;
    if f.degree() != 1 {
        return Err(CohomologyError::DegreeOutOfRange(f.degree()));
    }
    if !is_cocycle(&dual, f)? {
        return Err(CohomologyError::NotACocycle);
    }
    let z = GModule::trivial(m.group(), 1);
    BarCochain::from_fn(&z, 3, |t| {
        let moved = m.act(t[0], ext.cocycle.at(&t[1..]));
        vec![dot(f.at(&t[..1]), &moved)]
    })
}

/// Lift of a `Q/Z` value to `[0, 1)`, as a numerator over `den`.
fn lift_numerator(x: &BigRational, den: &BigInt) -> BigInt {
    let scaled = x * BigRational::from_integer(den.clone());
    scaled.to_integer().mod_floor(den)
}

/// `beta(chi)(g, h) = c(g) + c(h) - c(gh)` with `c` the lift of `chi` to `[0, 1)`;
/// a 2-cocycle with trivial integer coefficients.
pub fn bockstein(group: &FiniteGroup, chi: &QmodZCharacter) -> Result<BarCochain, CohomologyError> {
    let den = BigInt::from(chi.order());
    let lifts: Vec<BigInt> = group.elements().map(|g| lift_numerator(chi.value(g), &den)).collect();
    let z = GModule::trivial(group, 1);
    BarCochain::from_fn(&z, 2, |t| {
        let s = &lifts[t[0]] + &lifts[t[1]] - &lifts[group.mul(t[0], t[1])];
        debug_assert!((&s % &den).is_zero());
        vec![s / &den]
    })
}
