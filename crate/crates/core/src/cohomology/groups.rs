//! `H^n(G, M)` from the bar complex, with normal-form coordinates for classes.
//!
//! Two routes compute the same group:
//!
//! * kernel route: `ker d^n / im d^{n-1}` as an explicit subquotient (any
//!   module, any degree within budget);
//! * torsion route, for lattices and `n >= 1`: `H^n` is killed by `|G|`, and
//!   `ker d^n` is saturated in the free module `C^n`, so `ker d^n` is the
//!   saturation of `im d^{n-1}` and `H^n = Tors(C^n / im d^{n-1})`. Only
//!   `d^{n-1}` is assembled.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::cochain::{differential_matrix, is_cocycle, tuple_count, BarCochain, MAX_DEGREE};
use super::module::GModule;
use super::CohomologyError;
use crate::algebra::{integer_kernel, smith_normal_form, FgAbelianGroup, IntMatrix, IntVector, Subgroup};

/// A cohomology class: a cocycle and its coordinates in the computed group.
#[derive(Clone, Debug, PartialEq)]
pub struct CohomologyClass {
    pub degree: usize,
    pub representative: BarCochain,
    pub coordinates: IntVector,
}

impl CohomologyClass {
    pub fn is_zero(&self) -> bool {
        self.coordinates.iter().all(Zero::is_zero)
    }
}

#[derive(Clone, Debug)]
enum Route {
    /// Torsion of `C^n / im d^{n-1}`; the group's witness is relative to `C^n`.
    Torsion,
    /// `K / B` with `K` given by the columns of `kernel`.
    Kernel(KernelCoords),
}

/// Maps a vector of `K = span(kernel columns)` to its coefficients.
#[derive(Clone, Debug)]
struct KernelCoords {
    kernel: IntMatrix,
    /// Rows of `U` from the Smith form `U K V = D`, first `k` rows.
    u_rows: IntMatrix,
    v: IntMatrix,
    diag: Vec<BigInt>,
}

impl KernelCoords {
    fn new(kernel: IntMatrix) -> Self {
        let s = smith_normal_form(&kernel);
        let k = kernel.cols();
        let rows: Vec<usize> = (0..k).collect();
        let all: Vec<usize> = (0..kernel.rows()).collect();
        KernelCoords { u_rows: s.u.select(&rows, &all), v: s.v, diag: s.invariant_factors, kernel }
    }

    /// Coefficients `c` with `kernel * c = x`, if `x` lies in the span.
    fn express(&self, x: &[BigInt]) -> Option<IntVector> {
        let ux = self.u_rows.mul_vec(x);
        let mut y = Vec::with_capacity(ux.len());
        for (c, d) in ux.iter().zip(&self.diag) {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            y.push(q);
        }
        let c = self.v.mul_vec(&y);
        (self.kernel.mul_vec(&c) == x).then_some(c)
    }
}

/// `H^n(G, M)` together with the data needed to place cocycles in it.
#[derive(Clone, Debug)]
pub struct CohomologyGroup {
    module: GModule,
    degree: usize,
    group: FgAbelianGroup,
    route: Route,
}

impl CohomologyGroup {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn module(&self) -> &GModule {
        &self.module
    }

    /// The abstract group in invariant-factor form.
    pub fn group(&self) -> &FgAbelianGroup {
        &self.group
    }

    /// Places a cocycle in the group. Fails if `f` is not a cocycle.
    pub fn class_of(&self, f: &BarCochain) -> Result<CohomologyClass, CohomologyError> {
        if f.degree() != self.degree {
            return Err(CohomologyError::DegreeOutOfRange(f.degree()));
        }
        if !is_cocycle(&self.module, f)? {
            return Err(CohomologyError::NotACocycle);
        }
        let coordinates = match &self.route {
            Route::Torsion => {
                let c = self.group.coordinates(f.values())?;
                c
            }
            Route::Kernel(kc) => {
                let c = kc.express(f.values()).ok_or(CohomologyError::NotACocycle)?;
                self.group.coordinates(&c)?
            }
        };
        Ok(CohomologyClass { degree: self.degree, representative: f.clone(), coordinates })
    }

    /// A cocycle representing the given normal-form coordinates.
    pub fn representative(&self, coords: &[BigInt]) -> Result<BarCochain, CohomologyError> {
        let lifted = self.group.lift(coords)?;
        let values = match &self.route {
            Route::Torsion => lifted,
            Route::Kernel(kc) => kc.kernel.mul_vec(&lifted),
        };
        BarCochain::from_values(&self.module, self.degree, values)
    }

    /// Class of the `i`-th normal-form generator.
    pub fn generator(&self, i: usize) -> Result<CohomologyClass, CohomologyError> {
        let mut e = vec![BigInt::zero(); self.group.num_generators()];
        e[i] = BigInt::one();
        let rep = self.representative(&e)?;
        Ok(CohomologyClass { degree: self.degree, representative: rep, coordinates: e })
    }

    pub fn zero_class(&self) -> Result<CohomologyClass, CohomologyError> {
        Ok(CohomologyClass {
            degree: self.degree,
            representative: BarCochain::zero(&self.module, self.degree)?,
            coordinates: vec![BigInt::zero(); self.group.num_generators()],
        })
    }

    /// Subgroup generated by the given classes, with a membership test.
    pub fn image_subgroup(&self, classes: &[CohomologyClass]) -> Result<Subgroup, CohomologyError> {
        let gens: Vec<IntVector> = classes.iter().map(|c| c.coordinates.clone()).collect();
        Ok(self.group.subgroup(&gens)?)
    }

    /// Sum of two classes, computed on coordinates and representatives.
    pub fn add(&self, a: &CohomologyClass, b: &CohomologyClass) -> CohomologyClass {
        let coords: IntVector = a.coordinates.iter().zip(&b.coordinates).map(|(x, y)| x + y).collect();
        CohomologyClass {
            degree: self.degree,
            representative: a.representative.add(&b.representative),
            coordinates: self.group.normalize(&coords),
        }
    }

    pub fn equal(&self, a: &CohomologyClass, b: &CohomologyClass) -> bool {
        let diff: IntVector = a.coordinates.iter().zip(&b.coordinates).map(|(x, y)| x - y).collect();
        self.group.is_zero_element(&diff)
    }
}

fn check_degree(n: usize) -> Result<(), CohomologyError> {
    if n > MAX_DEGREE {
        Err(CohomologyError::DegreeOutOfRange(n))
    } else {
        Ok(())
    }
}

/// Relation columns `q_i e_i` of `C^n(G, Z^r) -> C^n(G, M)`.
fn relation_matrix(module: &GModule, n: usize) -> Result<IntMatrix, CohomologyError> {
    let r = module.rank();
    let count = tuple_count(module.group().order(), n)?;
    let mut cols = Vec::new();
    for t in 0..count {
        for i in 0..r {
            let q = module.modulus(i);
            if !q.is_zero() {
                let mut c = vec![BigInt::zero(); count * r];
                c[t * r + i] = q;
                cols.push(c);
            }
        }
    }
    Ok(IntMatrix::from_columns(count * r, &cols))
}

/// `H^n(G, M)` with coordinates. Uses the torsion route for lattices in
/// positive degree, the kernel route otherwise.
pub fn cohomology(module: &GModule, n: usize) -> Result<CohomologyGroup, CohomologyError> {
    check_degree(n)?;
    if module.is_lattice() && n >= 1 {
        let d_prev = differential_matrix(module, n - 1)?;
        let coker = FgAbelianGroup::cokernel(&d_prev);
        Ok(CohomologyGroup { module: module.clone(), degree: n, group: coker.torsion_subgroup(), route: Route::Torsion })
    } else {
        cohomology_via_kernel(module, n)
    }
}

/// `ker d^n / im d^{n-1}` computed as an explicit subquotient.
pub fn cohomology_via_kernel(module: &GModule, n: usize) -> Result<CohomologyGroup, CohomologyError> {
    check_degree(n)?;
    let r = module.rank();
    let len = tuple_count(module.group().order(), n)? * r;
    let d = differential_matrix(module, n)?;
    let q_next = relation_matrix(module, n + 1)?;
    // K = { x : d x in relations }, the projection of ker [d | Q] (injective
    // since the relation columns are independent)
    let ker = integer_kernel(&d.hstack(&q_next));
    let rows: Vec<usize> = (0..len).collect();
    let cols: Vec<usize> = (0..ker.cols()).collect();
    let kernel = ker.select(&rows, &cols);
    // B = im d^{n-1} + relations in degree n
    let mut boundary = relation_matrix(module, n)?;
    if n >= 1 {
        boundary = differential_matrix(module, n - 1)?.hstack(&boundary);
    }
    let (group, kc) = subquotient(kernel, &boundary);
    Ok(CohomologyGroup { module: module.clone(), degree: n, group, route: Route::Kernel(kc) })
}

/// `span(kernel) / span(image)`; the columns of `image` must lie in the span
/// of the (saturated) columns of `kernel`.
fn subquotient(kernel: IntMatrix, image: &IntMatrix) -> (FgAbelianGroup, KernelCoords) {
    let kc = KernelCoords::new(kernel);
    let mut coeffs = Vec::with_capacity(image.cols());
    for j in 0..image.cols() {
        coeffs.push(kc.express(&image.column(j)).expect("image lies in the kernel"));
    }
    let group = FgAbelianGroup::cokernel(&IntMatrix::from_columns(kc.kernel.cols(), &coeffs));
    (group, kc)
}

/// Isomorphism type of `span(kernel) / span(image)`.
pub(crate) fn subquotient_type(kernel: IntMatrix, image: &IntMatrix) -> FgAbelianGroup {
    subquotient(kernel, image).0
}

/// Isomorphism type of `H^n(G, M)` without coordinates; cheaper for large
/// lattices since no transforms are tracked.
pub fn cohomology_type(module: &GModule, n: usize) -> Result<FgAbelianGroup, CohomologyError> {
    check_degree(n)?;
    if module.is_lattice() && n >= 1 {
        let d_prev = differential_matrix(module, n - 1)?;
        Ok(FgAbelianGroup::cokernel_type(&d_prev).torsion_subgroup())
    } else {
        Ok(cohomology_via_kernel(module, n)?.group)
    }
}

/// Checks `d^{n+1} d^n = 0` on the assembled matrices.
pub fn differentials_compose_to_zero(module: &GModule, n: usize) -> Result<bool, CohomologyError> {
    let a = differential_matrix(module, n)?;
    let b = differential_matrix(module, n + 1)?;
    Ok((&b * &a).is_zero())
}
