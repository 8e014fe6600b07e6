//! The JSON input format for crystallographic data.
//!
//! ```json
//! {
//!   "rank": 2,
//!   "group": {"invariant_factors": []},
//!   "action": {"0": {"matrix": [[1, 0], [0, 1]], "translation": ["0", "0"]}},
//!   "complex_structure": [["0", "-1"], ["1", "0"]]
//! }
//! ```
//!
//! Elements of a group given by invariant factors are keyed by their digits,
//! first factor first (`"1,0"`); elements of a group given by a table are
//! keyed by their index. Rationals are strings `"p/q"`; floats are rejected.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::de::{MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

use crate::algebra::{format_rational, parse_rational, IntMatrix, RatMatrix};
use crate::crystal::{CrystalData, CrystalError, TangentCharacter, MAX_RANK};
use crate::group::{FiniteGroup, GroupError, QmodZCharacter};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("syntax: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Crystal(#[from] CrystalError),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError::Invalid(msg.into()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    InvariantFactors(Vec<u64>),
    Table(Vec<Vec<usize>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionEntry {
    pub matrix: Vec<Vec<i64>>,
    pub translation: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TangentEntry {
    /// Values on the group's generators.
    pub character: Vec<String>,
    pub multiplicity: usize,
}

/// The raw document, before any mathematical checks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub rank: usize,
    pub group: GroupSpec,
    #[serde(deserialize_with = "unique_keys")]
    pub action: BTreeMap<String, ActionEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub complex_structure: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tangent_characters: Option<Vec<TangentEntry>>,
}

fn unique_keys<'de, D: Deserializer<'de>>(de: D) -> Result<BTreeMap<String, ActionEntry>, D::Error> {
    struct V;
    impl<'de> Visitor<'de> for V {
        type Value = BTreeMap<String, ActionEntry>;
        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("a map from element keys to action entries")
        }
        fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Self::Value, A::Error> {
            let mut out = BTreeMap::new();
            while let Some((k, v)) = map.next_entry::<String, ActionEntry>()? {
                if out.contains_key(&k) {
                    return Err(serde::de::Error::custom(format!("duplicate action entry for element {k}")));
                }
                out.insert(k, v);
            }
            Ok(out)
        }
    }
    de.deserialize_map(V)
}

fn rational(s: &str, what: impl FnOnce() -> String) -> Result<BigRational, ParseError> {
    parse_rational(s).ok_or_else(|| ParseError::Invalid(format!("{}: {s:?} is not a rational \"p/q\" with q > 0", what())))
}

impl InputDocument {
    pub fn from_json(text: &str) -> Result<Self, ParseError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn to_crystal(&self) -> Result<CrystalData, ParseError> {
        let group = match &self.group {
            GroupSpec::InvariantFactors(f) => FiniteGroup::abelian(f)?,
            GroupSpec::Table(t) => FiniteGroup::from_table(t.clone())?,
        };
        let r = self.rank;
        if r > MAX_RANK {
            return Err(CrystalError::RankTooLarge(r).into());
        }
        if r % 2 == 1 {
            return Err(CrystalError::OddRank(r).into());
        }
        for key in self.action.keys() {
            if group.parse_key(key).is_none() {
                return invalid(format!("action entry {key:?} does not name a group element"));
            }
        }
        let mut linear = Vec::with_capacity(group.order());
        let mut translation = Vec::with_capacity(group.order());
        for g in group.elements() {
            let key = group.element_key(g);
            let entry = self
                .action
                .iter()
                .find(|(k, _)| group.parse_key(k) == Some(g))
                .map(|(_, v)| v)
                .ok_or_else(|| ParseError::Invalid(format!("missing action entry for element {key}")))?;
            if entry.matrix.len() != r || entry.matrix.iter().any(|row| row.len() != r) {
                return invalid(format!("matrix of element {key} is not {r}x{r}"));
            }
            if entry.translation.len() != r {
                return Err(CrystalError::TranslationLength {
                    element: key,
                    expected: r,
                    found: entry.translation.len(),
                }
                .into());
            }
            linear.push(IntMatrix::from_rows(
                entry.matrix.iter().map(|row| row.iter().map(|&x| BigInt::from(x)).collect()).collect(),
            ));
            let u = entry
                .translation
                .iter()
                .enumerate()
                .map(|(i, s)| rational(s, || format!("translation of element {key}, coordinate {i}")))
                .collect::<Result<Vec<_>, _>>()?;
            translation.push(u);
        }
        if self.action.len() != group.order() {
            return invalid(format!("expected {} action entries, found {}", group.order(), self.action.len()));
        }
        let j = match &self.complex_structure {
            None => None,
            Some(rows) => {
                if rows.len() != r || rows.iter().any(|row| row.len() != r) {
                    return invalid(format!("complex_structure is not {r}x{r}"));
                }
                let rows = rows
                    .iter()
                    .enumerate()
                    .map(|(i, row)| {
                        row.iter()
                            .enumerate()
                            .map(|(k, s)| rational(s, || format!("complex_structure entry ({i},{k})")))
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Some(RatMatrix::from_rows(rows))
            }
        };
        let tangent = match &self.tangent_characters {
            None => None,
            Some(entries) => {
                let mut out = Vec::with_capacity(entries.len());
                for (i, e) in entries.iter().enumerate() {
                    let values = e
                        .character
                        .iter()
                        .map(|s| rational(s, || format!("tangent character {i}")))
                        .collect::<Result<Vec<_>, _>>()?;
                    let character = QmodZCharacter::from_generator_values(&group, &values)?;
                    out.push(TangentCharacter { character, multiplicity: e.multiplicity });
                }
                Some(out)
            }
        };
        Ok(CrystalData::new(group, linear, translation, j, tangent)?)
    }

    pub fn from_crystal(d: &CrystalData) -> Self {
        let g = d.group();
        let group = match g.factors() {
            Some(f) => GroupSpec::InvariantFactors(f.to_vec()),
            None => GroupSpec::Table(g.table()),
        };
        let small = |x: &BigInt| i64::try_from(x).expect("matrix entries fit in i64");
        let action = g
            .elements()
            .map(|x| {
                let m = d.linear(x);
                let matrix = (0..m.rows()).map(|i| m.row(i).iter().map(small).collect()).collect();
                let translation = d.translation(x).iter().map(format_rational).collect();
                (g.element_key(x), ActionEntry { matrix, translation })
            })
            .collect();
        let complex_structure = d.complex_structure().map(|j| {
            (0..j.rows()).map(|i| j.row(i).iter().map(format_rational).collect()).collect()
        });
        let tangent_characters = d.tangent_characters().map(|t| {
            t.iter()
                .map(|c| TangentEntry {
                    character: c.character.generator_values(g).iter().map(format_rational).collect(),
                    multiplicity: c.multiplicity,
                })
                .collect()
        });
        InputDocument { rank: d.rank(), group, action, complex_structure, tangent_characters }
    }
}

/// Parses a JSON document into validated crystallographic data.
pub fn parse(text: &str) -> Result<CrystalData, ParseError> {
    InputDocument::from_json(text)?.to_crystal()
}

/// Serializes crystallographic data as a JSON document.
pub fn serialize(d: &CrystalData) -> String {
    InputDocument::from_crystal(d).to_json()
}

#[cfg(test)]
mod tests {
    use super::*;

    const TORUS: &str = r#"{
        "rank": 2,
        "group": {"invariant_factors": []},
        "action": {"0": {"matrix": [[1, 0], [0, 1]], "translation": ["0", "0"]}},
        "complex_structure": [["0", "-1"], ["1", "0"]]
    }"#;

    const SURFACE: &str = r#"{
        "rank": 4,
        "group": {"invariant_factors": [2]},
        "action": {
            "0": {"matrix": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]], "translation": ["0","0","0","0"]},
            "1": {"matrix": [[1,0,0,0],[0,1,0,0],[0,0,-1,0],[0,0,0,-1]], "translation": ["1/2","0","0","0"]}
        },
        "tangent_characters": [{"character": ["0"], "multiplicity": 1}, {"character": ["1/2"], "multiplicity": 1}]
    }"#;

    #[test]
    fn parses_and_round_trips() {
        for text in [TORUS, SURFACE] {
            let d = parse(text).unwrap();
            assert_eq!(parse(&serialize(&d)).unwrap(), d);
        }
    }

    #[test]
    fn table_groups_round_trip() {
        let table = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]];
        let g = FiniteGroup::from_table(table).unwrap();
        let a = IntMatrix::from_i64_rows(&[&[0, -1], &[1, -1]]);
        let d = CrystalData::new(
            g,
            vec![IntMatrix::identity(2), a.clone(), &a * &a],
            vec![vec![BigRational::from_integer(0.into()); 2]; 3],
            None,
            None,
        )
        .unwrap();
        let text = serialize(&d);
        assert!(text.contains("\"table\""));
        assert_eq!(parse(&text).unwrap(), d);
    }

    #[test]
    fn short_translation_is_named() {
        let text = SURFACE.replace(r#""translation": ["1/2","0","0","0"]"#, r#""translation": ["1/2","0","0"]"#);
        let err = parse(&text).unwrap_err();
        assert!(err.to_string().contains("translation length"), "{err}");
    }

    #[test]
    fn floats_are_rejected() {
        let text = TORUS.replace("[[1, 0], [0, 1]]", "[[1.0, 0], [0, 1]]");
        assert!(matches!(parse(&text), Err(ParseError::Syntax(_))));
        let text = TORUS.replace(r#"["0", "0"]"#, r#"[0.5, "0"]"#);
        assert!(matches!(parse(&text), Err(ParseError::Syntax(_))));
        let text = TORUS.replace(r#""translation": ["0", "0"]"#, r#""translation": ["0.5", "0"]"#);
        assert!(matches!(parse(&text), Err(ParseError::Invalid(_))));
    }

    #[test]
    fn missing_and_duplicate_entries() {
        let text = SURFACE.replace(r#""1": {"#, r#""0": {"#);
        let err = parse(&text).unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");
        let text = SURFACE.replace(r#""1": {"#, r#""7": {"#);
        assert!(parse(&text).unwrap_err().to_string().contains("\"7\""));
    }

    #[test]
    fn closure_error_is_actionable() {
        let text = SURFACE.replace(r#""translation": ["1/2""#, r#""translation": ["1/3""#);
        let err = parse(&text).unwrap_err();
        assert!(err.to_string().starts_with("closure fails at (1,1)"), "{err}");
    }

    #[test]
    fn wrong_tangent_characters() {
        let text = SURFACE.replace(r#"{"character": ["1/2"], "multiplicity": 1}"#, r#"{"character": ["0"], "multiplicity": 1}"#);
        assert!(matches!(parse(&text), Err(ParseError::Crystal(CrystalError::TangentCharacters(_)))));
    }
}
