use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn hyperell(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperell"))
        .args(args)
        .env_remove("HYPERELL_GALLERY_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn report_json_for_torus() {
    let f = data("torus.json");
    let o = hyperell(&["report", f.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["betti"], serde_json::json!([1, 2, 1]));
    assert_eq!(v["h1_group"], serde_json::json!({"free_rank": 2, "torsion": []}));
    let again = hyperell(&["report", f.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.stdout, again.stdout);
}

#[test]
fn report_keeps_field_order() {
    let o = hyperell(&["report", data("bdf.json").to_str().unwrap()]);
    let text = stdout(&o);
    let pos = |k: &str| text.find(&format!("\"{k}\"")).unwrap_or_else(|| panic!("missing {k}"));
    let keys = ["dimension", "group", "validation", "betti", "hodge", "h1_group", "psi", "tors_h2", "tangent", "chern", "aut0_dim"];
    for w in keys.windows(2) {
        assert!(pos(w[0]) < pos(w[1]), "{} before {}", w[0], w[1]);
    }
}

#[test]
fn report_text() {
    let o = hyperell(&["report", data("bdf.json").to_str().unwrap(), "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("betti: 1 2 7 12 7 2 1"));
    assert!(text.contains("Tors H^2(X,Z) = (Z/2)^4"));
    assert!(text.contains("all c_i trivial: yes"));
}

#[test]
fn validate_reports_fixed_point() {
    let o = hyperell(&["validate", data("non-free.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("element 1"), "{}", stderr(&o));
    let ok = hyperell(&["validate", data("surface-z3.json").to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));
    let json = hyperell(&["validate", data("surface-z3.json").to_str().unwrap(), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(v["bdf"], serde_json::Value::Bool(true));
}

#[test]
fn parse_errors_exit_2() {
    let o = hyperell(&["report", data("short-translation.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("translation length"), "{}", stderr(&o));
    let missing = hyperell(&["betti", "no/such/file.json"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn subcommands() {
    let z3 = data("surface-z3.json");
    let z3 = z3.to_str().unwrap();
    assert_eq!(stdout(&hyperell(&["betti", z3, "--format", "text"])).trim(), "1 2 2 2 1");
    assert_eq!(stdout(&hyperell(&["hodge", z3, "--format", "text"])).trim(), "1 1 0");

    let chern: serde_json::Value = serde_json::from_slice(&hyperell(&["chern", z3]).stdout).unwrap();
    assert_eq!(chern["chern"]["all_ci_trivial"], serde_json::Value::Bool(true));
    assert_eq!(chern["chern"]["canonical_trivial_in_pic"], serde_json::Value::Bool(false));

    let four = data("fourfold.json");
    let inv: serde_json::Value = serde_json::from_slice(&hyperell(&["invariants", four.to_str().unwrap()]).stdout).unwrap();
    assert_eq!(inv["h1_free_rank"], serde_json::json!(0));
    assert_eq!(inv["psi"]["zero"], serde_json::Value::Bool(true));
    assert_eq!(inv["aut0_dim"], serde_json::json!(0));
    assert!(inv.get("betti").is_none());
}

#[test]
fn missing_tangent_data_exits_4() {
    let o = hyperell(&["hodge", data("surface-z3-no-j.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
    let b = hyperell(&["betti", data("surface-z3-no-j.json").to_str().unwrap(), "--format", "text"]);
    assert_eq!(b.status.code(), Some(0));
}

#[test]
fn gallery_list_and_run() {
    let list = stdout(&hyperell(&["gallery", "list"]));
    for id in ["bdf-threefold-z2", "hyperelliptic-4fold-z2z2", "hyperelliptic-surface-z2", "torus-curve"] {
        assert!(list.lines().any(|l| l.starts_with(id)), "{id} missing");
    }
    assert!(list.lines().count() >= 8);
    let run = hyperell(&["gallery", "run"]);
    assert_eq!(run.status.code(), Some(0), "{}", stdout(&run));
    assert!(stdout(&run).contains("0 failed"));
    let one = hyperell(&["gallery", "run", "bdf-threefold-z2"]);
    assert_eq!(stdout(&one).lines().filter(|l| l.starts_with("ok")).count(), 1);
    assert_eq!(hyperell(&["gallery", "run", "nonexistent"]).status.code(), Some(2));
}

#[test]
fn gallery_mismatch_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let input: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(data("torus.json")).unwrap()).unwrap();
    let entry = serde_json::json!({
        "id": "wrong-torus",
        "description": "torus with a wrong golden value",
        "input": input,
        "expected": {"betti": {"value": [1, 3, 1], "provenance": "deliberately wrong"}}
    });
    std::fs::write(dir.path().join("wrong.json"), entry.to_string()).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_hyperell"))
        .args(["gallery", "run"])
        .env("HYPERELL_GALLERY_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    let out = stdout(&o);
    assert!(out.contains("FAIL  wrong-torus"));
    assert!(out.contains("betti: expected [1,3,1], got [1,2,1]"), "{out}");
}
