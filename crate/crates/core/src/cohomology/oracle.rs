//! Closed-form cohomology of a cyclic group acting on a lattice.
//!
//! For `G = <g>` of order `m` with `g` acting by `A` and `N = sum A^k`, the
//! periodic resolution gives `H^0 = ker(A - I)`, `H^odd = ker N / im(A - I)`
//! and `H^even>0 = ker(A - I) / im N`. No bar complex is involved, so this
//! serves as an independent check.

use super::groups::subquotient_type;
use super::module::GModule;
use super::CohomologyError;
use crate::algebra::{integer_kernel, FgAbelianGroup, IntMatrix};

#[derive(Clone, Debug, PartialEq)]
pub struct CyclicCohomology {
    pub h0: FgAbelianGroup,
    pub h1: FgAbelianGroup,
    pub h2: FgAbelianGroup,
}

impl CyclicCohomology {
    pub fn degree(&self, n: usize) -> &FgAbelianGroup {
        match n {
            0 => &self.h0,
            n if n % 2 == 1 => &self.h1,
            _ => &self.h2,
        }
    }
}

pub fn cyclic_cohomology_oracle(module: &GModule) -> Result<CyclicCohomology, CohomologyError> {
    if !module.is_lattice() {
        return Err(CohomologyError::InvalidModule("oracle needs a lattice".into()));
    }
    let g = module.group();
    let gen = g.cyclic_generator().ok_or(CohomologyError::NotCyclic)?;
    let r = module.rank();
    let a = module.action(gen);
    let a_minus = a - &IntMatrix::identity(r);
    let mut norm = IntMatrix::zeros(r, r);
    let mut power = IntMatrix::identity(r);
    for _ in 0..g.order() {
        norm = &norm + &power;
        power = &power * a;
    }
    let fixed = integer_kernel(&a_minus);
    let h0 = FgAbelianGroup::free(fixed.cols());
    let h1 = subquotient_type(integer_kernel(&norm), &a_minus);
    let h2 = subquotient_type(fixed, &norm);
    Ok(CyclicCohomology { h0, h1, h2 })
}
