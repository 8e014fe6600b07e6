//! The assembled invariant report and its JSON and text renderings.

use std::fmt::Write as _;

use num_integer::Integer;
use serde::Serialize;

use crate::algebra::{CycloNumber, FgAbelianGroup};
use crate::crystal::{coinvariants, gamma_abelianized, validate, CrystalData, ValidationReport};
use crate::invariants::{
    aut0_dimension, betti_numbers, chern_verdict, complex_determinant, h1_integral, hodge_numbers, ns_invariant_rank,
    psi_image, tangent_decomposition, tors_h2, InvariantsError,
};

/// A finitely generated abelian group as `{"free_rank": r, "torsion": [d_i]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupJson {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl From<&FgAbelianGroup> for GroupJson {
    fn from(g: &FgAbelianGroup) -> Self {
        GroupJson {
            free_rank: g.free_rank(),
            torsion: g.torsion().iter().map(|d| u64::try_from(d).expect("torsion order fits in u64")).collect(),
        }
    }
}

impl std::fmt::Display for GroupJson {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let orders: Vec<num_bigint::BigInt> = self
            .torsion
            .iter()
            .map(|&d| d.into())
            .chain(std::iter::repeat_n(0.into(), self.free_rank))
            .collect();
        write!(f, "{}", FgAbelianGroup::from_cyclic_orders(&orders))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupSummary {
    pub order: usize,
    pub abelian: bool,
    pub cyclic: bool,
    /// Invariant factors of `G^ab`.
    pub abelianization: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationJson {
    pub valid: bool,
    pub faithful: bool,
    pub no_translations: bool,
    pub free: bool,
    pub torsion_free: bool,
    pub non_free_element: Option<String>,
    pub even: Option<bool>,
    pub bdf: bool,
    pub messages: Vec<String>,
}

impl From<&ValidationReport> for ValidationJson {
    fn from(v: &ValidationReport) -> Self {
        ValidationJson {
            valid: v.is_valid(),
            faithful: v.faithful,
            no_translations: v.no_translations,
            free: v.free,
            torsion_free: v.torsion_free(),
            non_free_element: v.non_free_element.clone(),
            even: v.even,
            bdf: v.bdf,
            messages: v.messages.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PsiJson {
    /// Rank of `(Lambda^dual)^G`.
    pub invariant_rank: usize,
    pub image: GroupJson,
    pub cokernel: GroupJson,
    pub onto: bool,
    pub zero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TorsH2Json {
    pub group: GroupJson,
    /// `"proven"` for cyclic groups, `"candidate"` otherwise.
    pub status: String,
}

/// `H^2(X, Z)` described by its rank and torsion; no splitting is claimed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct H2Json {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterJson {
    /// Values on the group's generators.
    pub character: Vec<String>,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TangentJson {
    pub source: String,
    pub characters: Vec<CharacterJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterChernJson {
    pub character: Vec<String>,
    pub multiplicity: usize,
    /// Coordinates of the Bockstein class in `H^2(G, Z)`.
    pub c1_class: Vec<String>,
    pub in_image_of_psi: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChernJson {
    pub characters: Vec<CharacterChernJson>,
    pub determinant_character: Vec<String>,
    pub total_c1_trivial: bool,
    pub all_ci_trivial: bool,
    pub canonical_trivial_in_pic: bool,
    pub canonical_c1_trivial: bool,
}

/// Everything computed for one datum. Field order is part of the output format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub dimension: usize,
    pub group: GroupSummary,
    pub validation: ValidationJson,
    pub betti: Option<Vec<usize>>,
    pub hodge: Option<Vec<usize>>,
    pub h1_free_rank: Option<usize>,
    pub h1_group: Option<GroupJson>,
    pub gamma_ab: Option<GroupJson>,
    pub coinvariants: Option<GroupJson>,
    pub h2_group_cohomology: Option<GroupJson>,
    pub psi: Option<PsiJson>,
    pub tors_h2: Option<TorsH2Json>,
    pub h2_full: Option<H2Json>,
    pub tangent: Option<TangentJson>,
    pub chern: Option<ChernJson>,
    pub aut0_dim: Option<usize>,
    pub ns_rank: Option<usize>,
    pub unavailable: Vec<String>,
}

fn character_json(d: &CrystalData, chi: &crate::group::QmodZCharacter) -> Vec<String> {
    chi.generator_values(d.group()).iter().map(crate::algebra::format_rational).collect()
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), InvariantsError> {
    if ok {
        Ok(())
    } else {
        Err(InvariantsError::CrossCheck(what()))
    }
}

/// Runs the whole pipeline. Fields that need `J` or an abelian group are left
/// empty with a reason in `unavailable`; an invalid datum yields only the
/// validation section. Internal identities are checked before returning.
pub fn full_report(d: &CrystalData) -> Result<InvariantReport, InvariantsError> {
    let g = d.group();
    let validation = validate(d);
    let mut r = InvariantReport {
        dimension: d.dimension(),
        group: GroupSummary {
            order: g.order(),
            abelian: g.is_abelian(),
            cyclic: g.is_cyclic(),
            abelianization: GroupJson::from(&FgAbelianGroup::from_cyclic_orders(g.abelianization_invariants())).torsion,
        },
        validation: ValidationJson::from(&validation),
        betti: None,
        hodge: None,
        h1_free_rank: None,
        h1_group: None,
        gamma_ab: None,
        coinvariants: None,
        h2_group_cohomology: None,
        psi: None,
        tors_h2: None,
        h2_full: None,
        tangent: None,
        chern: None,
        aut0_dim: None,
        ns_rank: None,
        unavailable: Vec::new(),
    };
    if !validation.is_valid() {
        r.unavailable.push("invariants: the datum is not valid".into());
        return Ok(r);
    }

    let betti = betti_numbers(d)?;
    let n2 = 2 * d.dimension();
    let euler: i64 = betti.iter().enumerate().map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) }).sum();
    ensure(euler == 0, || format!("Euler characteristic is {euler}, expected 0"))?;
    ensure((0..=n2).all(|k| betti[k] == betti[n2 - k]), || "Poincare duality b_k = b_(2n-k) fails".into())?;

    let psi = psi_image(d)?;
    let h1 = h1_integral(d, &psi)?;
    ensure(h1.group.free_rank() == betti[1], || format!("rank H^1(X,Z) = {} but b_1 = {}", h1.group.free_rank(), betti[1]))?;
    let tors = tors_h2(d)?;
    r.h1_free_rank = Some(h1.group.free_rank());
    r.h1_group = Some((&h1.group).into());
    r.gamma_ab = Some((&gamma_abelianized(d)).into());
    r.coinvariants = Some((&coinvariants(d)).into());
    r.h2_group_cohomology = Some(psi.h2_group.group().into());
    r.psi = Some(PsiJson {
        invariant_rank: psi.functionals.rows(),
        image: psi.image().into(),
        cokernel: psi.cokernel().into(),
        onto: psi.is_onto(),
        zero: psi.image().is_trivial(),
    });
    r.tors_h2 = Some(TorsH2Json {
        group: (&tors.group).into(),
        status: if tors.proven { "proven" } else { "candidate" }.into(),
    });
    if g.is_cyclic() {
        // universal coefficients: Tors H^2(X, Z) = Tors H_1(X, Z)
        let t = GroupJson::from(&gamma_abelianized(d).torsion_subgroup());
        r.h2_full = Some(H2Json { free_rank: betti[2], torsion: t.torsion });
    }

    match tangent_decomposition(d) {
        Ok(t) => {
            let hodge = hodge_numbers(d, &t);
            ensure(betti[1] == 2 * hodge[1], || format!("b_1 = {} but 2 h^(0,1) = {}", betti[1], 2 * hodge[1]))?;
            let chern = chern_verdict(d, &t, &psi)?;
            let det = t.determinant_character(g);
            if d.complex_structure().is_some() {
                let f = (g.exponent() as u32).lcm(&4);
                for x in g.elements() {
                    let lhs = complex_determinant(d, x)?.embed(f);
                    let rhs = CycloNumber::root_of_unity(f, det.value(x)).expect("exponent divides conductor");
                    ensure(lhs == rhs, || {
                        format!("det of L({}) on the tangent space disagrees with the determinant character", g.element_key(x))
                    })?;
                }
            }
            r.aut0_dim = Some(aut0_dimension(d, &t)?);
            r.hodge = Some(hodge);
            r.tangent = Some(TangentJson {
                source: t.source.as_str().into(),
                characters: t
                    .characters
                    .iter()
                    .map(|c| CharacterJson { character: character_json(d, &c.character), multiplicity: c.multiplicity })
                    .collect(),
            });
            r.chern = Some(ChernJson {
                characters: chern
                    .characters
                    .iter()
                    .map(|c| CharacterChernJson {
                        character: character_json(d, &c.character),
                        multiplicity: c.multiplicity,
                        c1_class: c.c1.coordinates.iter().map(|x| x.to_string()).collect(),
                        in_image_of_psi: c.in_image_of_psi,
                    })
                    .collect(),
                determinant_character: character_json(d, &det),
                total_c1_trivial: chern.total_c1_trivial,
                all_ci_trivial: chern.all_ci_trivial,
                canonical_trivial_in_pic: chern.canonical_trivial_in_pic,
                canonical_c1_trivial: chern.canonical_c1_trivial,
            });
        }
        Err(InvariantsError::Unavailable(why)) => {
            r.unavailable.push(format!("tangent, hodge, chern, aut0: {why}"));
        }
        Err(e) => return Err(e),
    }

    match ns_invariant_rank(d) {
        Ok(k) => r.ns_rank = Some(k),
        Err(InvariantsError::Unavailable(why)) => r.unavailable.push(format!("ns_rank: {why}")),
        Err(e) => return Err(e),
    }
    r.betti = Some(betti);
    Ok(r)
}

impl InvariantReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }

    /// Human-readable summary.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let list = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ");
        let chars = |v: &[String]| format!("[{}]", v.join(", "));
        let _ = writeln!(s, "dimension n = {}, |G| = {}{}", self.dimension, self.group.order, if self.group.cyclic {
            " (cyclic)"
        } else if self.group.abelian {
            " (abelian)"
        } else {
            ""
        });
        let v = &self.validation;
        let _ = writeln!(s, "valid: {}", if v.valid { "yes" } else { "no" });
        for m in &v.messages {
            let _ = writeln!(s, "  {m}");
        }
        if let Some(b) = &self.betti {
            let _ = writeln!(s, "betti: {}", list(b));
        }
        if let Some(h) = &self.hodge {
            let _ = writeln!(s, "hodge h^(0,q): {}", list(h));
        }
        if let Some(h1) = &self.h1_group {
            let _ = writeln!(s, "H^1(X,Z) = {h1}");
        }
        if let Some(x) = &self.gamma_ab {
            let _ = writeln!(s, "Gamma^ab = {x}");
        }
        if let Some(x) = &self.coinvariants {
            let _ = writeln!(s, "coinvariants = {x}");
        }
        if let Some(x) = &self.h2_group_cohomology {
            let _ = writeln!(s, "H^2(G,Z) = {x}");
        }
        if let Some(p) = &self.psi {
            let _ = writeln!(s, "psi: image {}, cokernel {}", p.image, p.cokernel);
        }
        if let Some(t) = &self.tors_h2 {
            let _ = writeln!(s, "Tors H^2(X,Z) = {} ({})", t.group, t.status);
        }
        if let Some(h) = &self.h2_full {
            let t = GroupJson { free_rank: 0, torsion: h.torsion.clone() };
            let _ = writeln!(s, "H^2(X,Z): rank {}, torsion {}", h.free_rank, t);
        }
        if let Some(t) = &self.tangent {
            let parts: Vec<String> = t.characters.iter().map(|c| format!("{} x{}", chars(&c.character), c.multiplicity)).collect();
            let _ = writeln!(s, "tangent characters ({}): {}", t.source, parts.join(", "));
        }
        if let Some(c) = &self.chern {
            for x in &c.characters {
                let _ = writeln!(
                    s,
                    "  c1(L_{}) {}",
                    chars(&x.character),
                    if x.in_image_of_psi { "= 0" } else { "!= 0" }
                );
            }
            let yes = |b: bool| if b { "yes" } else { "no" };
            let _ = writeln!(s, "total c1 trivial: {}", yes(c.total_c1_trivial));
            let _ = writeln!(s, "all c_i trivial: {}", yes(c.all_ci_trivial));
            let _ = writeln!(s, "K_X trivial in Pic: {}", yes(c.canonical_trivial_in_pic));
            let _ = writeln!(s, "c1(K_X) trivial: {}", yes(c.canonical_c1_trivial));
        }
        if let Some(a) = self.aut0_dim {
            let _ = writeln!(s, "dim Aut^0(X) = {a}");
        }
        if let Some(k) = self.ns_rank {
            let _ = writeln!(s, "rank NS(T)^G = {k}");
        }
        for u in &self.unavailable {
            let _ = writeln!(s, "unavailable: {u}");
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::parse;

    #[test]
    fn torus_report() {
        let d = parse(
            r#"{"rank": 2, "group": {"invariant_factors": []},
                "action": {"0": {"matrix": [[1, 0], [0, 1]], "translation": ["0", "0"]}},
                "complex_structure": [["0", "-1"], ["1", "0"]]}"#,
        )
        .unwrap();
        let r = full_report(&d).unwrap();
        assert_eq!(r.betti, Some(vec![1, 2, 1]));
        let json = r.to_json();
        assert!(json.contains("\"betti\": [\n    1,\n    2,\n    1\n  ]"));
        let c = r.chern.as_ref().unwrap();
        assert!(c.all_ci_trivial && c.total_c1_trivial && c.canonical_trivial_in_pic && c.canonical_c1_trivial);
        assert_eq!(r.ns_rank, Some(1));
        assert_eq!(full_report(&d).unwrap().to_json(), json);
        assert!(r.to_text().contains("betti: 1 2 1"));
    }

    #[test]
    fn invalid_datum_has_only_validation() {
        let d = parse(
            r#"{"rank": 2, "group": {"invariant_factors": [2]},
                "action": {"0": {"matrix": [[1, 0], [0, 1]], "translation": ["0", "0"]},
                           "1": {"matrix": [[-1, 0], [0, -1]], "translation": ["0", "0"]}}}"#,
        )
        .unwrap();
        let r = full_report(&d).unwrap();
        assert!(!r.validation.valid);
        assert_eq!(r.validation.non_free_element.as_deref(), Some("1"));
        assert!(r.betti.is_none() && r.chern.is_none());
    }
}
