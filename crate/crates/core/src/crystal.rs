//! Crystallographic data `(Lambda, L, u, J)`: a lattice `Lambda = Z^{2n}`, an
//! integral representation `L` of a finite group `G`, rational translation
//! parts `u_g`, and optionally a rational complex structure `J` and the
//! characters of the tangent representation.
//!
//! The affine maps `x -> L(g) x + u_g` generate the group `Gamma`, an
//! extension of `G` by `Lambda`; the quotient of the torus `R^{2n} / Lambda`
//! by `G` is the manifold the invariants describe.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::algebra::{
    format_rational, integer_left_kernel, solve_integer, CycloNumber, FgAbelianGroup, IntMatrix, RatMatrix,
    RatVector,
};
use crate::cohomology::{BarCochain, CohomologyError, ExtensionClass, GModule};
use crate::group::{character_group, FiniteGroup, GroupError, QmodZCharacter};

/// Largest supported lattice rank.
pub const MAX_RANK: usize = 32;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CrystalError {
    #[error("lattice rank must be positive")]
    EmptyLattice,
    #[error("lattice rank {0} is odd; it must be 2n")]
    OddRank(usize),
    #[error("lattice rank {0} exceeds the supported maximum {MAX_RANK}")]
    RankTooLarge(usize),
    #[error("expected {expected} {what}, found {found}")]
    Count { what: &'static str, expected: usize, found: usize },
    #[error("matrix of element {element} is {rows}x{cols}, expected {rank}x{rank}")]
    MatrixShape { element: String, rows: usize, cols: usize, rank: usize },
    #[error("translation length of element {element} is {found}, expected {expected}")]
    TranslationLength { element: String, expected: usize, found: usize },
    #[error("matrix of element {element} has determinant {det}, expected +1 or -1")]
    NotUnimodular { element: String, det: BigInt },
    #[error("linear parts are not a representation: {0}")]
    NotARepresentation(String),
    #[error("translation of the identity is not a lattice vector")]
    IdentityTranslation,
    #[error("closure fails at ({g},{h}): lambda has non-integer coordinate {coordinate} (value {value})")]
    Closure { g: String, h: String, coordinate: usize, value: String },
    #[error("complex structure: {0}")]
    ComplexStructure(String),
    #[error("tangent characters: {0}")]
    TangentCharacters(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
}

/// A character with its multiplicity in the tangent representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangentCharacter {
    pub character: QmodZCharacter,
    pub multiplicity: usize,
}

/// Validated crystallographic data. Translations are normalized so that
/// `u_e = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct CrystalData {
    group: FiniteGroup,
    linear: Vec<IntMatrix>,
    translation: Vec<RatVector>,
    complex_structure: Option<RatMatrix>,
    tangent_characters: Option<Vec<TangentCharacter>>,
}

fn rat(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

impl CrystalData {
    /// Checks every structural invariant; the first violation is reported.
    pub fn new(
        group: FiniteGroup,
        linear: Vec<IntMatrix>,
        translation: Vec<RatVector>,
        complex_structure: Option<RatMatrix>,
        tangent_characters: Option<Vec<TangentCharacter>>,
    ) -> Result<Self, CrystalError> {
        let order = group.order();
        if linear.len() != order {
            return Err(CrystalError::Count { what: "linear parts", expected: order, found: linear.len() });
        }
        if translation.len() != order {
            return Err(CrystalError::Count { what: "translations", expected: order, found: translation.len() });
        }
        let rank = linear[0].rows();
        if rank > MAX_RANK {
            return Err(CrystalError::RankTooLarge(rank));
        }
        if rank == 0 {
            return Err(CrystalError::EmptyLattice);
        }
        if rank % 2 == 1 {
            return Err(CrystalError::OddRank(rank));
        }
        for g in group.elements() {
            let a = &linear[g];
            if a.rows() != rank || a.cols() != rank {
                return Err(CrystalError::MatrixShape {
                    element: group.element_key(g),
                    rows: a.rows(),
                    cols: a.cols(),
                    rank,
                });
            }
            if translation[g].len() != rank {
                return Err(CrystalError::TranslationLength {
                    element: group.element_key(g),
                    expected: rank,
                    found: translation[g].len(),
                });
            }
            let det = a.determinant();
            if det.abs() != BigInt::one() {
                return Err(CrystalError::NotUnimodular { element: group.element_key(g), det });
            }
        }
        GModule::lattice(&group, linear.clone()).map_err(|e| match e {
            CohomologyError::InvalidModule(msg) => CrystalError::NotARepresentation(msg),
            other => other.into(),
        })?;
        let e = group.identity();
        if !translation[e].iter().all(BigRational::is_integer) {
            return Err(CrystalError::IdentityTranslation);
        }
        // shifting the section by u_e keeps the same group Gamma
        let mut translation = translation;
        translation[e] = vec![BigRational::zero(); rank];
        let d = CrystalData { group, linear, translation, complex_structure: None, tangent_characters: None };
        d.check_closure()?;
        let d = CrystalData { complex_structure: complex_structure.map(|j| d.check_complex_structure(j)).transpose()?, ..d };
        let tangent = tangent_characters.map(|t| d.check_tangent(t)).transpose()?;
        Ok(CrystalData { tangent_characters: tangent, ..d })
    }

    fn check_closure(&self) -> Result<(), CrystalError> {
        for g in self.group.elements() {
            for h in self.group.elements() {
                let l = self.rational_factor(g, h);
                if let Some((i, v)) = l.iter().enumerate().find(|(_, v)| !v.is_integer()) {
                    return Err(CrystalError::Closure {
                        g: self.group.element_key(g),
                        h: self.group.element_key(h),
                        coordinate: i,
                        value: format_rational(v),
                    });
                }
            }
        }
        Ok(())
    }

    fn check_complex_structure(&self, j: RatMatrix) -> Result<RatMatrix, CrystalError> {
        let r = self.rank();
        if j.rows() != r || j.cols() != r {
            return Err(CrystalError::ComplexStructure(format!("expected a {r}x{r} matrix")));
        }
        let minus_one = RatMatrix::identity(r).scale(&-BigRational::one());
        if &j * &j != minus_one {
            return Err(CrystalError::ComplexStructure("J^2 != -I".into()));
        }
        for g in self.group.elements() {
            let l = self.linear[g].to_rat();
            if &j * &l != &l * &j {
                return Err(CrystalError::ComplexStructure(format!(
                    "J does not commute with the linear part of element {}",
                    self.group.element_key(g)
                )));
            }
        }
        Ok(j)
    }

    fn check_tangent(&self, chars: Vec<TangentCharacter>) -> Result<Vec<TangentCharacter>, CrystalError> {
        if !self.group.is_abelian() {
            return Err(CrystalError::TangentCharacters("only supported for abelian groups".into()));
        }
        let total: usize = chars.iter().map(|c| c.multiplicity).sum();
        if total != self.dimension() {
            return Err(CrystalError::TangentCharacters(format!(
                "multiplicities sum to {total}, expected the dimension {}",
                self.dimension()
            )));
        }
        // merge repeated characters, drop zero multiplicities
        let mut merged: Vec<TangentCharacter> = Vec::new();
        for c in chars {
            if c.multiplicity == 0 {
                continue;
            }
            match merged.iter_mut().find(|m| m.character == c.character) {
                Some(m) => m.multiplicity += c.multiplicity,
                None => merged.push(c),
            }
        }
        let mults = character_multiplicities(&self.group, &self.linear)?;
        for (chi, m) in &mults {
            let p = |x: &QmodZCharacter| merged.iter().find(|c| &c.character == x).map_or(0, |c| c.multiplicity);
            let (a, b) = (p(chi), p(&chi.conj()));
            let sum = if chi.is_real_valued() { 2 * a } else { a + b };
            if sum != *m {
                return Err(CrystalError::TangentCharacters(format!(
                    "character {} has p + p_conj = {sum}, but the lattice multiplicity is {m}",
                    format_character(&self.group, chi)
                )));
            }
        }
        Ok(merged)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    /// Real rank `2n` of the lattice.
    pub fn rank(&self) -> usize {
        self.linear[0].rows()
    }

    /// Complex dimension `n`.
    pub fn dimension(&self) -> usize {
        self.rank() / 2
    }

    pub fn linear(&self, g: usize) -> &IntMatrix {
        &self.linear[g]
    }

    pub fn linear_parts(&self) -> &[IntMatrix] {
        &self.linear
    }

    pub fn translation(&self, g: usize) -> &RatVector {
        &self.translation[g]
    }

    pub fn complex_structure(&self) -> Option<&RatMatrix> {
        self.complex_structure.as_ref()
    }

    pub fn tangent_characters(&self) -> Option<&[TangentCharacter]> {
        self.tangent_characters.as_deref()
    }

    /// `Lambda` as a `G`-module.
    pub fn lattice_module(&self) -> GModule {
        GModule::lattice(&self.group, self.linear.clone()).expect("checked at construction")
    }

    fn rational_factor(&self, g: usize, h: usize) -> RatVector {
        let lu = self.linear[g].to_rat().mul_vec(&self.translation[h]);
        let gh = self.group.mul(g, h);
        (0..self.rank()).map(|i| &self.translation[g][i] + &lu[i] - &self.translation[gh][i]).collect()
    }

    /// `lambda(g, h) = u_g + L(g) u_h - u_{gh}` as an integer vector.
    pub fn factor(&self, g: usize, h: usize) -> Vec<BigInt> {
        self.rational_factor(g, h).iter().map(|x| x.to_integer()).collect()
    }
}

/// Readable form of a character: its values on the group's generators.
pub fn format_character(g: &FiniteGroup, chi: &QmodZCharacter) -> String {
    let v: Vec<String> = chi.generator_values(g).iter().map(format_rational).collect();
    format!("[{}]", v.join(", "))
}

/// Outcome of the validity checks on a datum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    /// `L(g) = I` only for `g = e`.
    pub faithful: bool,
    /// `Gamma` contains no translations beyond `Lambda`; the same check as
    /// `faithful`.
    pub no_translations: bool,
    /// Every `g != e` acts without fixed points, hence `Gamma` is torsion-free.
    pub free: bool,
    pub non_free_element: Option<String>,
    /// Evenness of the real isotypic components; `None` for nonabelian `G`.
    pub even: Option<bool>,
    /// `G` cyclic.
    pub bdf: bool,
    pub messages: Vec<String>,
}

impl ValidationReport {
    /// All checks pass (evenness counted only where it is decided).
    pub fn is_valid(&self) -> bool {
        self.faithful && self.no_translations && self.free && self.even != Some(false)
    }

    /// Torsion-freeness of `Gamma`, stated as a consequence of freeness.
    pub fn torsion_free(&self) -> bool {
        self.free
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let yes = |b: bool| if b { "yes" } else { "no" };
        writeln!(f, "faithful:        {}", yes(self.faithful))?;
        writeln!(f, "no translations: {}", yes(self.no_translations))?;
        match &self.non_free_element {
            Some(g) => writeln!(f, "free:            no (element {g} has a fixed point)")?,
            None => writeln!(f, "free:            yes (Gamma torsion-free)")?,
        }
        match self.even {
            Some(b) => writeln!(f, "even:            {}", yes(b))?,
            None => writeln!(f, "even:            not checked (nonabelian group)")?,
        }
        writeln!(f, "cyclic (BdF):    {}", yes(self.bdf))?;
        for m in &self.messages {
            writeln!(f, "  {m}")?;
        }
        write!(f, "valid:           {}", yes(self.is_valid()))
    }
}

pub fn validate(d: &CrystalData) -> ValidationReport {
    let g = d.group();
    let mut messages = Vec::new();
    let identity = IntMatrix::identity(d.rank());
    let kernel: Vec<usize> = g.elements().filter(|&x| x != g.identity() && d.linear(x) == &identity).collect();
    let faithful = kernel.is_empty();
    for &x in &kernel {
        messages.push(format!("element {} acts by a pure translation", g.element_key(x)));
    }
    let non_free = g.elements().filter(|&x| x != g.identity()).find(|&x| !free_action(d, x).unwrap_or(false));
    if let Some(x) = non_free {
        messages.push(format!("element {} has a fixed point on the torus", g.element_key(x)));
    }
    let even = match evenness(d) {
        Ok(e) => {
            if !e {
                messages.push("a real isotypic component has odd multiplicity".into());
            }
            Some(e)
        }
        Err(_) => None,
    };
    ValidationReport {
        faithful,
        no_translations: faithful,
        free: non_free.is_none(),
        non_free_element: non_free.map(|x| g.element_key(x)),
        even,
        bdf: g.is_cyclic(),
        messages,
    }
}

/// Whether `x -> L(g) x + u_g` is fixed-point free on the torus.
///
/// A fixed point is a solution of `(L - I) x = lambda - u` with `x` real and
/// `lambda` in `Lambda`. With `P` an integral basis of the left kernel of
/// `L - I`, this is solvable iff `P lambda = P u` for some integral `lambda`.
pub fn free_action(d: &CrystalData, g: usize) -> Result<bool, CrystalError> {
    if g == d.group().identity() {
        return Err(CrystalError::NotARepresentation("freeness is undefined for the identity".into()));
    }
    let r = d.rank();
    let l_minus = d.linear(g) - &IntMatrix::identity(r);
    let p = integer_left_kernel(&l_minus);
    if p.rows() == 0 {
        return Ok(false);
    }
    let pu = p.to_rat().mul_vec(d.translation(g));
    if !pu.iter().all(BigRational::is_integer) {
        return Ok(true);
    }
    let target: Vec<BigInt> = pu.iter().map(|x| x.to_integer()).collect();
    Ok(solve_integer(&p, &target).map_err(CohomologyError::from)?.is_none())
}

/// Multiplicity of every character of the abelian group `G` in the
/// representation `Q^r` given by `matrices`, `m_chi = (1/|G|) sum tr L(g) conj chi(g)`.
pub fn character_multiplicities(
    group: &FiniteGroup,
    matrices: &[IntMatrix],
) -> Result<Vec<(QmodZCharacter, usize)>, CrystalError> {
    let chars = character_group(group)?;
    let e = group.exponent() as u32;
    let order = BigRational::from_integer(group.order().into());
    let mut out = Vec::with_capacity(chars.len());
    for chi in chars {
        let mut sum = CycloNumber::zero(e);
        for g in group.elements() {
            let z = CycloNumber::root_of_unity(e, &-chi.value(g).clone()).expect("value has order dividing e");
            sum = &sum + &z.scale(&rat(&matrices[g].trace()));
        }
        let m = sum
            .as_rational()
            .map(|q| q / &order)
            .filter(|q| q.is_integer() && !q.is_negative())
            .ok_or_else(|| CrystalError::NotARepresentation("character multiplicity is not a natural number".into()))?;
        let m: usize = m.to_integer().try_into().expect("multiplicity bounded by rank");
        out.push((chi, m));
    }
    Ok(out)
}

/// Evenness for abelian `G`: every real-valued character has even multiplicity.
pub fn evenness(d: &CrystalData) -> Result<bool, CrystalError> {
    evenness_of(d.group(), d.linear_parts())
}

pub fn evenness_of(group: &FiniteGroup, matrices: &[IntMatrix]) -> Result<bool, CrystalError> {
    Ok(character_multiplicities(group, matrices)?.iter().all(|(chi, m)| !chi.is_real_valued() || m % 2 == 0))
}

/// The factor set of `Gamma` as a 2-cocycle with values in `Lambda`.
pub fn factor_set(d: &CrystalData) -> Result<ExtensionClass, CrystalError> {
    let module = d.lattice_module();
    let cocycle = BarCochain::from_fn(&module, 2, |t| d.factor(t[0], t[1]))?;
    Ok(ExtensionClass::new(&module, cocycle)?)
}

/// `Gamma^ab`, presented by the lattice basis and symbols `gamma_g` subject to
/// `(I - L(g)) e_i = 0` and `gamma_g + gamma_h - gamma_{gh} - lambda(g, h) = 0`.
pub fn gamma_abelianized(d: &CrystalData) -> FgAbelianGroup {
    FgAbelianGroup::cokernel(&gamma_relations(d))
}

fn gamma_relations(d: &CrystalData) -> IntMatrix {
    let g = d.group();
    let r = d.rank();
    let n = g.order();
    let rows = r + n;
    let mut cols: Vec<Vec<BigInt>> = Vec::new();
    for x in g.elements() {
        let m = &IntMatrix::identity(r) - d.linear(x);
        for j in 0..r {
            let mut c = m.column(j);
            c.resize(rows, BigInt::zero());
            if c.iter().any(|v| !v.is_zero()) {
                cols.push(c);
            }
        }
    }
    for x in g.elements() {
        for y in g.elements() {
            let mut c = vec![BigInt::zero(); rows];
            for (i, v) in d.factor(x, y).into_iter().enumerate() {
                c[i] = -v;
            }
            c[r + x] += 1;
            c[r + y] += 1;
            c[r + g.mul(x, y)] -= 1;
            cols.push(c);
        }
    }
    IntMatrix::from_columns(rows, &cols)
}

/// `Lambda_G = Lambda / sum_g im(I - L(g))`.
pub fn coinvariants(d: &CrystalData) -> FgAbelianGroup {
    let r = d.rank();
    let blocks = d.group().elements().map(|x| &IntMatrix::identity(r) - d.linear(x));
    let stacked = blocks.fold(IntMatrix::zeros(r, 0), |acc, m| acc.hstack(&m));
    FgAbelianGroup::cokernel(&stacked)
}
