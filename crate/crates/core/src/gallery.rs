//! Built-in example data with golden values.
//!
//! Each fixture is a JSON file `{id, description, input, expected}` where
//! `expected` maps dotted paths into the JSON report (for example
//! `chern.all_ci_trivial` or `betti.2`) to `{value, provenance}`.
//! The fixtures are compiled in; setting `HYPERELL_GALLERY_DIR` reads every
//! `*.json` file of that directory instead.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::io::{InputDocument, ParseError};
use crate::report::{full_report, InvariantReport};

/// Environment variable overriding the fixture directory.
pub const GALLERY_DIR_ENV: &str = "HYPERELL_GALLERY_DIR";

const BUILTIN: &[(&str, &str)] = &[
    ("01-torus-curve.json", include_str!("../gallery/01-torus-curve.json")),
    ("02-torus-surface.json", include_str!("../gallery/02-torus-surface.json")),
    ("03-torus-threefold.json", include_str!("../gallery/03-torus-threefold.json")),
    ("04-hyperelliptic-surface-z2.json", include_str!("../gallery/04-hyperelliptic-surface-z2.json")),
    ("05-hyperelliptic-surface-z3.json", include_str!("../gallery/05-hyperelliptic-surface-z3.json")),
    ("06-hyperelliptic-surface-z4.json", include_str!("../gallery/06-hyperelliptic-surface-z4.json")),
    ("07-hyperelliptic-surface-z6.json", include_str!("../gallery/07-hyperelliptic-surface-z6.json")),
    ("08-bdf-threefold-z2.json", include_str!("../gallery/08-bdf-threefold-z2.json")),
    ("09-hyperelliptic-4fold-z2z2.json", include_str!("../gallery/09-hyperelliptic-4fold-z2z2.json")),
    ("10-bdf-threefold-z4-glued.json", include_str!("../gallery/10-bdf-threefold-z4-glued.json")),
];

#[derive(Debug, Error)]
pub enum GalleryError {
    #[error("reading {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("fixture {name}: {source}")]
    Fixture { name: String, source: serde_json::Error },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedValue {
    pub value: Value,
    /// How the value was established.
    pub provenance: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GalleryEntry {
    pub id: String,
    pub description: String,
    pub input: InputDocument,
    pub expected: BTreeMap<String, ExpectedValue>,
}

fn parse_fixture(name: &str, text: &str) -> Result<GalleryEntry, GalleryError> {
    serde_json::from_str(text).map_err(|source| GalleryError::Fixture { name: name.to_string(), source })
}

/// The compiled-in fixtures, ignoring the environment.
pub fn builtin() -> Result<Vec<GalleryEntry>, GalleryError> {
    BUILTIN.iter().map(|(name, text)| parse_fixture(name, text)).collect()
}

/// Every `*.json` fixture of a directory, ordered by file name.
pub fn load_dir(dir: &Path) -> Result<Vec<GalleryEntry>, GalleryError> {
    let io_err = |source| GalleryError::Io { path: dir.display().to_string(), source };
    let mut paths: Vec<_> = std::fs::read_dir(dir)
        .map_err(io_err)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let text = std::fs::read_to_string(p).map_err(|source| GalleryError::Io { path: p.display().to_string(), source })?;
            parse_fixture(&p.display().to_string(), &text)
        })
        .collect()
}

/// The gallery: the override directory if set, the compiled-in fixtures otherwise.
pub fn gallery() -> Result<Vec<GalleryEntry>, GalleryError> {
    match std::env::var_os(GALLERY_DIR_ENV) {
        Some(dir) => load_dir(Path::new(&dir)),
        None => builtin(),
    }
}

/// Follows a dotted path such as `chern.characters.0.in_image_of_psi`.
pub fn lookup<'a>(value: &'a Value, path: &str) -> Option<&'a Value> {
    path.split('.').try_fold(value, |v, key| match v {
        Value::Object(m) => m.get(key),
        Value::Array(a) => key.parse::<usize>().ok().and_then(|i| a.get(i)),
        _ => None,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mismatch {
    pub path: String,
    pub expected: Value,
    pub actual: Option<Value>,
}

#[derive(Clone, Debug)]
pub struct EntryOutcome {
    pub id: String,
    pub report: Option<InvariantReport>,
    pub mismatches: Vec<Mismatch>,
    /// Parse or pipeline failure; the entry then counts as failed.
    pub error: Option<String>,
}

impl EntryOutcome {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.mismatches.is_empty()
    }
}

/// Computes the report for an entry and compares every expected value.
pub fn run_entry(entry: &GalleryEntry) -> EntryOutcome {
    let fail = |error: String| EntryOutcome { id: entry.id.clone(), report: None, mismatches: Vec::new(), error: Some(error) };
    let d = match entry.input.to_crystal() {
        Ok(d) => d,
        Err(e) => return fail(format!("parse: {e}")),
    };
    let report = match full_report(&d) {
        Ok(r) => r,
        Err(e) => return fail(e.to_string()),
    };
    let json = report.to_value();
    let mismatches = entry
        .expected
        .iter()
        .filter_map(|(path, exp)| {
            let actual = lookup(&json, path);
            (actual != Some(&exp.value)).then(|| Mismatch { path: path.clone(), expected: exp.value.clone(), actual: actual.cloned() })
        })
        .collect();
    let error = (!report.validation.valid).then(|| "entry does not validate".to_string());
    EntryOutcome { id: entry.id.clone(), report: Some(report), mismatches, error }
}

/// Parse errors of an entry's input, for callers that want the typed error.
pub fn entry_data(entry: &GalleryEntry) -> Result<crate::crystal::CrystalData, ParseError> {
    entry.input.to_crystal()
}
