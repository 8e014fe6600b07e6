//! Invariants of `X = T/G` computed from crystallographic data: Betti and
//! Hodge numbers, `H^1(X, Z)`, the transgression `psi` and its image,
//! torsion of `H^2(X, Z)`, the tangent characters and Chern verdicts.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::algebra::rational::{inverse, rank};
use crate::algebra::{integer_kernel, CycloNumber, FgAbelianGroup, IntMatrix, RatMatrix, RatVector, Subgroup};
use crate::cohomology::{
    bockstein, cohomology, pair_with_invariant, CohomologyClass, CohomologyError, CohomologyGroup,
};
use crate::crystal::{
    character_multiplicities, factor_set, format_character, gamma_abelianized, CrystalData, CrystalError,
    TangentCharacter,
};
use crate::group::{character_group, GroupError, QmodZCharacter};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InvariantsError {
    #[error("unavailable: {0}")]
    Unavailable(String),
    #[error("internal cross-check failed: {0}")]
    CrossCheck(String),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error(transparent)]
    Crystal(#[from] CrystalError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

type Result<T> = std::result::Result<T, InvariantsError>;

fn cross_check(ok: bool, what: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(InvariantsError::CrossCheck(what()))
    }
}

fn to_usize(x: &BigInt) -> usize {
    usize::try_from(x).expect("small non-negative integer")
}

/// Elementary symmetric functions `e_0..e_r` of the eigenvalues of `a`.
fn elementary_symmetric(a: &IntMatrix) -> Vec<BigInt> {
    a.char_poly().into_iter().enumerate().map(|(k, c)| if k % 2 == 0 { c } else { -c }).collect()
}

/// `b_k = (1/|G|) sum_g tr(Lambda^k L(g))`, for `k = 0..2n`.
pub fn betti_numbers(d: &CrystalData) -> Result<Vec<usize>> {
    let r = d.rank();
    let mut sums = vec![BigInt::zero(); r + 1];
    for g in d.group().elements() {
        for (k, e) in elementary_symmetric(d.linear(g)).into_iter().enumerate() {
            sums[k] += e;
        }
    }
    let order = BigInt::from(d.group().order());
    sums.iter()
        .enumerate()
        .map(|(k, s)| {
            let (q, rem) = s.div_rem(&order);
            if !rem.is_zero() || q.is_negative() {
                return Err(InvariantsError::InvalidAction(format!("average trace on degree {k} is {s}/{order}")));
            }
            Ok(to_usize(&q))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TangentSource {
    Given,
    ComputedFromJ,
    /// Every character present is real-valued, so the split is forced.
    Forced,
}

impl TangentSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            TangentSource::Given => "given",
            TangentSource::ComputedFromJ => "computed-from-J",
            TangentSource::Forced => "forced",
        }
    }
}

/// The characters of `G` on the holomorphic tangent space, with multiplicities.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentDecomposition {
    pub characters: Vec<TangentCharacter>,
    pub source: TangentSource,
}

impl TangentDecomposition {
    pub fn multiplicity(&self, chi: &QmodZCharacter) -> usize {
        self.characters.iter().filter(|c| &c.character == chi).map(|c| c.multiplicity).sum()
    }

    pub fn trivial_multiplicity(&self) -> usize {
        self.characters.iter().filter(|c| c.character.is_trivial()).map(|c| c.multiplicity).sum()
    }

    /// `sum p_i chi_i`, the character of `g` on the top exterior power.
    pub fn determinant_character(&self, group: &crate::group::FiniteGroup) -> QmodZCharacter {
        self.characters
            .iter()
            .fold(QmodZCharacter::trivial(group), |acc, c| acc.add(&c.character.times(c.multiplicity as i64)))
    }

    /// The characters listed with repetition.
    pub fn expanded(&self) -> Vec<QmodZCharacter> {
        self.characters.iter().flat_map(|c| std::iter::repeat_n(c.character.clone(), c.multiplicity)).collect()
    }
}

/// Conductor hosting character values and `i`.
fn trace_conductor(d: &CrystalData) -> u32 {
    (d.group().exponent() as u32).lcm(&4)
}

/// Trace of `L(g)` on the `+i`-eigenspace of `J`: `(tr L - i tr(J L)) / 2`.
pub fn tangent_trace(d: &CrystalData, g: usize) -> Result<CycloNumber> {
    let j = d.complex_structure().ok_or_else(|| InvariantsError::Unavailable("no complex structure".into()))?;
    let f = trace_conductor(d);
    let l = d.linear(g).to_rat();
    let tr_l = l.trace();
    let tr_jl = (j * &l).trace();
    let i = CycloNumber::zeta_pow(f, (f / 4) as i64);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let re = CycloNumber::from_rational(f, tr_l);
    Ok((&re - &i.scale(&tr_jl)).scale(&half))
}

fn tangent_from_j(d: &CrystalData) -> Result<Vec<TangentCharacter>> {
    let g = d.group();
    let f = trace_conductor(d);
    let traces: Vec<CycloNumber> = g.elements().map(|x| tangent_trace(d, x)).collect::<Result<_>>()?;
    let order = BigRational::from_integer(g.order().into());
    let mut out = Vec::new();
    for chi in character_group(g)? {
        let mut sum = CycloNumber::zero(f);
        for x in g.elements() {
            let z = CycloNumber::root_of_unity(f, &-chi.value(x).clone()).expect("exponent divides conductor");
            sum = &sum + &(&traces[x] * &z);
        }
        let p = sum
            .as_rational()
            .map(|q| q / &order)
            .filter(|q| q.is_integer() && !q.is_negative())
            .ok_or_else(|| {
                InvariantsError::CrossCheck(format!(
                    "tangent multiplicity of {} is not a natural number",
                    format_character(g, &chi)
                ))
            })?;
        let p = to_usize(&p.to_integer());
        if p > 0 {
            out.push(TangentCharacter { character: chi, multiplicity: p });
        }
    }
    Ok(out)
}

fn same_multiset(a: &[TangentCharacter], b: &[TangentCharacter]) -> bool {
    let count = |v: &[TangentCharacter], chi: &QmodZCharacter| -> usize {
        v.iter().filter(|c| &c.character == chi).map(|c| c.multiplicity).sum()
    };
    a.iter().chain(b).all(|c| count(a, &c.character) == count(b, &c.character))
}

/// The tangent characters: as given (checked against `J` when both are
/// present), computed from `J`, or forced when every character occurring in
/// the lattice is real-valued.
pub fn tangent_decomposition(d: &CrystalData) -> Result<TangentDecomposition> {
    let g = d.group();
    if !g.is_abelian() {
        return Err(InvariantsError::Unavailable("tangent characters need an abelian group".into()));
    }
    if let Some(given) = d.tangent_characters() {
        if d.complex_structure().is_some() {
            let from_j = tangent_from_j(d)?;
            cross_check(same_multiset(given, &from_j), || "given tangent characters disagree with J".into())?;
        }
        return Ok(TangentDecomposition { characters: given.to_vec(), source: TangentSource::Given });
    }
    let mults = character_multiplicities(g, d.linear_parts())?;
    if d.complex_structure().is_some() {
        let characters = tangent_from_j(d)?;
        for (chi, m) in &mults {
            let p = |x: &QmodZCharacter| characters.iter().find(|c| &c.character == x).map_or(0, |c| c.multiplicity);
            let sum = if chi.is_real_valued() { 2 * p(chi) } else { p(chi) + p(&chi.conj()) };
            cross_check(sum == *m, || format!("p + p_conj != m for {}", format_character(g, chi)))?;
        }
        return Ok(TangentDecomposition { characters, source: TangentSource::ComputedFromJ });
    }
    let mut characters = Vec::new();
    for (chi, m) in mults {
        if m == 0 {
            continue;
        }
        if !chi.is_real_valued() {
            return Err(InvariantsError::Unavailable(format!(
                "character {} is not real-valued; its tangent split needs J or explicit tangent characters",
                format_character(g, &chi)
            )));
        }
        characters.push(TangentCharacter { character: chi, multiplicity: m / 2 });
    }
    Ok(TangentDecomposition { characters, source: TangentSource::Forced })
}

/// `h^{0,q}` for `q = 0..n`: the number of `q`-element subsets of the
/// conjugate tangent characters (with multiplicity) summing to the trivial
/// character.
pub fn hodge_numbers(d: &CrystalData, t: &TangentDecomposition) -> Vec<usize> {
    let n = d.dimension();
    let trivial = QmodZCharacter::trivial(d.group());
    // layers[q]: character sum -> number of q-subsets so far
    let mut layers: Vec<HashMap<QmodZCharacter, usize>> = vec![HashMap::new(); n + 1];
    layers[0].insert(trivial.clone(), 1);
    for chi in t.expanded() {
        let c = chi.conj();
        for q in (0..n).rev() {
            let moved: Vec<(QmodZCharacter, usize)> = layers[q].iter().map(|(s, k)| (s.add(&c), *k)).collect();
            for (s, k) in moved {
                *layers[q + 1].entry(s).or_insert(0) += k;
            }
        }
    }
    layers.iter().map(|l| l.get(&trivial).copied().unwrap_or(0)).collect()
}

/// Basis of `(Lambda^dual)^G` as the rows of the result.
pub fn invariant_functionals(d: &CrystalData) -> IntMatrix {
    let r = d.rank();
    let stacked = d
        .group()
        .elements()
        .map(|g| &d.linear(g).transpose() - &IntMatrix::identity(r))
        .fold(IntMatrix::zeros(0, r), |acc, m| acc.vstack(&m));
    integer_kernel(&stacked).transpose()
}

/// `psi : (Lambda^dual)^G -> H^2(G, Z)` on a basis, with its image.
#[derive(Clone, Debug)]
pub struct PsiImage {
    pub h2_group: CohomologyGroup,
    /// Rows: the basis `phi_j` of invariant functionals.
    pub functionals: IntMatrix,
    pub images: Vec<CohomologyClass>,
    pub subgroup: Subgroup,
}

impl PsiImage {
    pub fn image(&self) -> &FgAbelianGroup {
        self.subgroup.as_group()
    }

    pub fn cokernel(&self) -> &FgAbelianGroup {
        self.subgroup.quotient()
    }

    pub fn is_onto(&self) -> bool {
        self.subgroup.is_everything()
    }

    pub fn contains(&self, c: &CohomologyClass) -> Result<bool> {
        Ok(self.subgroup.contains(&c.coordinates).map_err(CohomologyError::from)?)
    }

    /// Basis of `ker psi` in the coordinates of `functionals`, as columns.
    pub fn kernel_basis(&self) -> IntMatrix {
        let k = self.images.len();
        let h = self.h2_group.group();
        let m = h.num_generators();
        let mut cols: Vec<Vec<BigInt>> = self.images.iter().map(|c| c.coordinates.clone()).collect();
        for i in 0..h.torsion().len() {
            let mut c = vec![BigInt::zero(); m];
            c[i] = h.torsion()[i].clone();
            cols.push(c);
        }
        let ker = integer_kernel(&IntMatrix::from_columns(m, &cols));
        let rows: Vec<usize> = (0..k).collect();
        let all: Vec<usize> = (0..ker.cols()).collect();
        ker.select(&rows, &all)
    }
}

pub fn psi_image(d: &CrystalData) -> Result<PsiImage> {
    let ext = factor_set(d)?;
    let z = crate::cohomology::GModule::trivial(d.group(), 1);
    let h2_group = cohomology(&z, 2)?;
    let functionals = invariant_functionals(d);
    let mut images = Vec::with_capacity(functionals.rows());
    for j in 0..functionals.rows() {
        let c = pair_with_invariant(&ext, functionals.row(j))?;
        images.push(h2_group.class_of(&c)?);
    }
    let subgroup = h2_group.image_subgroup(&images)?;
    Ok(PsiImage { h2_group, functionals, images, subgroup })
}

/// `H^1(X, Z) = Z^{b_1}` with its embedding into `(Lambda^dual)^G` as `ker psi`.
#[derive(Clone, Debug)]
pub struct H1Integral {
    pub group: FgAbelianGroup,
    /// Rows: functionals on `Lambda` spanning `ker psi`.
    pub embedding: IntMatrix,
}

/// Computed twice, as the free part of `Gamma^ab` and as `ker psi`; the ranks
/// must agree.
pub fn h1_integral(d: &CrystalData, psi: &PsiImage) -> Result<H1Integral> {
    let via_gamma = gamma_abelianized(d).free_rank();
    let kernel = psi.kernel_basis();
    let embedding = (&psi.functionals.transpose() * &kernel).transpose();
    let via_psi = rank(&kernel.to_rat());
    cross_check(via_gamma == via_psi, || {
        format!("rank of Gamma^ab ({via_gamma}) differs from rank of ker psi ({via_psi})")
    })?;
    Ok(H1Integral { group: FgAbelianGroup::free(via_gamma), embedding })
}

/// `H^1(G, Lambda^dual)`, the candidate for `Tors H^2(X, Z)`.
///
/// It injects into `H^2(X, Z)`, and the remaining torsion comes from
/// `coker psi`. The identification is therefore proven when `G` is cyclic
/// (so that `H^3(G, Z) = 0`) and `psi` is onto; it is then checked against
/// `Tors(Gamma^ab)`. A free cyclic action need not make `psi` onto: when a
/// power `g^k` is free only through a translation along the `+1` eigenspace of
/// `L(g)^k` that is not fixed by `g`, the invariant translation has order
/// below `m` and the candidate is strictly smaller than `Tors(Gamma^ab)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TorsH2 {
    pub group: FgAbelianGroup,
    pub proven: bool,
}

pub fn tors_h2(d: &CrystalData) -> Result<TorsH2> {
    let dual = d.lattice_module().dual()?;
    let group = cohomology(&dual, 1)?.group().clone();
    let proven = d.group().is_cyclic() && psi_image(d)?.is_onto();
    if proven {
        let t = gamma_abelianized(d).torsion_subgroup();
        cross_check(t == group, || format!("H^1(G, Lambda^dual) = {group} but Tors(Gamma^ab) = {t}"))?;
    }
    Ok(TorsH2 { group, proven })
}

#[derive(Clone, Debug)]
pub struct CharacterChern {
    pub character: QmodZCharacter,
    pub multiplicity: usize,
    /// Bockstein of the character in `H^2(G, Z)`.
    pub c1: CohomologyClass,
    /// `c_1` of the line bundle vanishes in `H^2(X, Z)`.
    pub in_image_of_psi: bool,
}

#[derive(Clone, Debug)]
pub struct ChernVerdict {
    pub characters: Vec<CharacterChern>,
    pub total_c1_trivial: bool,
    pub all_ci_trivial: bool,
    pub canonical_trivial_in_pic: bool,
    pub canonical_c1_trivial: bool,
}

pub fn chern_verdict(d: &CrystalData, t: &TangentDecomposition, psi: &PsiImage) -> Result<ChernVerdict> {
    let g = d.group();
    let h2 = &psi.h2_group;
    let mut characters = Vec::new();
    for c in &t.characters {
        let class = h2.class_of(&bockstein(g, &c.character)?)?;
        let in_image = psi.contains(&class)?;
        characters.push(CharacterChern {
            character: c.character.clone(),
            multiplicity: c.multiplicity,
            c1: class,
            in_image_of_psi: in_image,
        });
    }
    let det = t.determinant_character(g);
    let total = h2.class_of(&bockstein(g, &det)?)?;
    let total_c1_trivial = psi.contains(&total)?;
    let all_ci_trivial = characters.iter().all(|c| c.in_image_of_psi);
    // K_X corresponds to the dual determinant; its class is the negative
    let canonical = h2.class_of(&bockstein(g, &det.conj())?)?;
    let v = ChernVerdict {
        characters,
        total_c1_trivial,
        all_ci_trivial,
        canonical_trivial_in_pic: det.is_trivial(),
        canonical_c1_trivial: psi.contains(&canonical)?,
    };
    cross_check(!v.all_ci_trivial || v.total_c1_trivial, || "all c_i trivial but c_1 is not".into())?;
    cross_check(!v.canonical_trivial_in_pic || v.canonical_c1_trivial, || {
        "canonical bundle trivial in Pic but c_1(K) nonzero".into()
    })?;
    Ok(v)
}

/// `dim Aut^0(X)`: the multiplicity of the trivial tangent character.
pub fn aut0_dimension(d: &CrystalData, t: &TangentDecomposition) -> Result<usize> {
    let p = t.trivial_multiplicity();
    let h01 = hodge_numbers(d, t).get(1).copied().unwrap_or(0);
    cross_check((p == 0) == (h01 == 0), || format!("aut0 = {p} but h^(0,1) = {h01}"))?;
    Ok(p)
}

/// Rank of the integral alternating forms `E` with `L(g)^T E L(g) = E` for all
/// `g` and `J^T E J = E`.
pub fn ns_invariant_rank(d: &CrystalData) -> Result<usize> {
    let j = d.complex_structure().ok_or_else(|| InvariantsError::Unavailable("no complex structure".into()))?;
    let r = d.rank();
    let pairs: Vec<(usize, usize)> = (0..r).flat_map(|a| (a + 1..r).map(move |b| (a, b))).collect();
    let mut maps: Vec<RatMatrix> = d.group().generators().iter().map(|&g| d.linear(g).to_rat()).collect();
    maps.push(j.clone());
    let mut columns: Vec<RatVector> = Vec::with_capacity(pairs.len());
    for &(a, b) in &pairs {
        let mut e = RatMatrix::zeros(r, r);
        e.set(a, b, BigRational::one());
        e.set(b, a, -BigRational::one());
        let mut col = Vec::new();
        for m in &maps {
            let diff = &(&(&m.transpose() * &e) * m) - &e;
            col.extend(pairs.iter().map(|&(x, y)| diff.get(x, y).clone()));
        }
        columns.push(col);
    }
    let rows = pairs.len() * maps.len();
    let system = RatMatrix::from_columns(rows, &columns);
    Ok(pairs.len() - rank(&system))
}

fn cyclo_det(mut m: Vec<Vec<CycloNumber>>, f: u32) -> CycloNumber {
    let n = m.len();
    let mut det = CycloNumber::one(f);
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return CycloNumber::zero(f);
        };
        if p != c {
            m.swap(p, c);
            det = -&det;
        }
        det = &det * &m[c][c];
        let inv = m[c][c].inverse().expect("nonzero pivot");
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let factor = &m[i][c] * &inv;
            for k in c..n {
                let sub = &factor * &m[c][k];
                m[i][k] = &m[i][k] - &sub;
            }
        }
    }
    det
}

/// Determinant of `L(g)` as a complex-linear map of `(Q^{2n}, J)`, in `Q(i)`.
pub fn complex_determinant(d: &CrystalData, g: usize) -> Result<CycloNumber> {
    let j = d.complex_structure().ok_or_else(|| InvariantsError::Unavailable("no complex structure".into()))?;
    let r = d.rank();
    let n = d.dimension();
    // vectors v_k such that v_1..v_n, J v_1..J v_n is a basis
    let mut vs: Vec<RatVector> = Vec::new();
    for e in 0..r {
        if vs.len() == n {
            break;
        }
        let mut cand = vs.clone();
        let mut x = vec![BigRational::zero(); r];
        x[e] = BigRational::one();
        cand.push(x.clone());
        let span: Vec<RatVector> = cand.iter().cloned().chain(cand.iter().map(|v| j.mul_vec(v))).collect();
        if rank(&RatMatrix::from_columns(r, &span)) == 2 * cand.len() {
            vs.push(x);
        }
    }
    let basis: Vec<RatVector> = vs.iter().cloned().chain(vs.iter().map(|v| j.mul_vec(v))).collect();
    let b_inv = inverse(&RatMatrix::from_columns(r, &basis))
        .ok_or_else(|| InvariantsError::CrossCheck("no J-adapted basis".into()))?;
    let l = d.linear(g).to_rat();
    let i = CycloNumber::zeta_pow(4, 1);
    let mut m = vec![vec![CycloNumber::zero(4); n]; n];
    for k in 0..n {
        let c = b_inv.mul_vec(&l.mul_vec(&vs[k]));
        for row in 0..n {
            let re = CycloNumber::from_rational(4, c[row].clone());
            m[row][k] = &re + &i.scale(&c[n + row]);
        }
    }
    Ok(cyclo_det(m, 4))
}
