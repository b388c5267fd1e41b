//! End-to-end runs of the `perftower` binary.
//!
//! Golden reports live in `tests/golden/`; regenerate with `UPDATE_GOLDEN=1`.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use perftower::corpus::{self, TowerText, FAMILIES, MUTATIONS};
use perftower::report::Verdict;
use perftower::tower::ZariskianSemantics;

fn manifest_dir() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_perftower"));
    cmd.current_dir(manifest_dir()).args(args);
    match cache {
        Some(dir) => cmd.env("PERFTOWER_CACHE", dir),
        None => cmd.arg("--no-cache"),
    };
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const TOWER_COMMANDS: [&str; 8] = ["check", "theorem-a", "gr", "tilt", "basechange", "zariskize", "dim", "lemmas"];
const PAIR_COMMANDS: [&str; 2] = ["gr", "lemmas"];

fn examples() -> Vec<PathBuf> {
    let mut out: Vec<PathBuf> = std::fs::read_dir(manifest_dir().join("examples"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "tower"))
        .collect();
    out.sort();
    out
}

fn is_pair(path: &Path) -> bool {
    std::fs::read_to_string(path).unwrap().contains("[pair]")
}

fn golden_check(name: &str, actual: &str) {
    let path = manifest_dir().join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden {}", path.display()));
    assert_eq!(actual, expected, "golden mismatch for {name}");
}

/// Cold cache, warm cache and no cache give the golden report byte for byte.
#[test]
fn golden_reports_are_stable_across_cache_states() {
    for path in examples() {
        let stem = path.file_stem().unwrap().to_str().unwrap().to_string();
        let rel = format!("examples/{stem}.tower");
        let commands: &[&str] = if is_pair(&path) { &PAIR_COMMANDS } else { &TOWER_COMMANDS };
        for cmd in commands {
            let cache = tempfile::tempdir().unwrap();
            let args = [*cmd, rel.as_str(), "--format", "json"];
            let cold = run(&args, Some(cache.path()));
            assert!(cold.status.code().is_some_and(|c| c < 2), "{cmd} {rel}: {}", String::from_utf8_lossy(&cold.stderr));
            let warm = run(&args, Some(cache.path()));
            let none = run(&args, None);
            assert_eq!(stdout(&cold), stdout(&warm), "{cmd} {rel}: cold vs warm");
            assert_eq!(stdout(&cold), stdout(&none), "{cmd} {rel}: cold vs no cache");
            assert_eq!(cold.status.code(), none.status.code());
            golden_check(&format!("{stem}.{cmd}.json"), &stdout(&cold));
        }
    }
}

#[test]
fn corrupted_cache_is_bypassed_with_a_warning() {
    let cache = tempfile::tempdir().unwrap();
    let args = ["check", "examples/torsion_family.tower", "--format", "json"];
    let clean = run(&args, Some(cache.path()));
    let mut damaged = 0;
    for entry in std::fs::read_dir(cache.path()).unwrap() {
        let p = entry.unwrap().path();
        let text = std::fs::read_to_string(&p).unwrap();
        // Swap the basis for a plausible but wrong one.
        std::fs::write(&p, text.replacen("\"basis\":[", "\"basis\":[{\"terms\":[]},", 1)).unwrap();
        damaged += 1;
    }
    assert!(damaged > 0, "the first run populates the cache");
    let again = run(&args, Some(cache.path()));
    assert_eq!(stdout(&clean), stdout(&again));
    assert!(String::from_utf8_lossy(&again.stderr).contains("warning: ignoring corrupted cache entry"));
}

#[test]
fn check_on_the_mixed_tower_passes_with_after_zariskization() {
    let o = run(&["check", "examples/mixed_p2.tower"], None);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("semantics: after_zariskization"));
    assert!(text.contains("(e) semantics: after_zariskization"));
    assert!(!text.contains(" fail"));
}

#[test]
fn theorem_a_prints_the_agreement_line() {
    let o = run(&["theorem-a", "examples/torsion_family.tower"], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("agreement: (g) pass, (g') pass: agree"));
}

#[test]
fn inline_pair_table() {
    let o = run(&["gr", "--pair", "Z[y]/(3y,y^2)", "--f", "3", "--n", "3", "--format", "json"], None);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let row = |label: &str| {
        v["table"].as_array().unwrap().iter().find(|r| r["label"] == label).unwrap()["value"].as_str().unwrap().to_string()
    };
    // C_0 = J + (f); from degree 1 on the pieces stabilize at (3, y).
    assert_eq!(row("C_0"), "(3, y^2)");
    for n in 1..=3 {
        assert_eq!(row(&format!("C_{n}")), "(3, y)");
    }
    assert_eq!(row("gr^0"), "A/(3, y^2)");
    assert_eq!(row("torsion"), "(y)");
    assert!(v["table"].as_array().unwrap().iter().all(|r| r["label"] != "C_4"));
}

#[test]
fn errors_exit_with_status_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.tower");
    std::fs::write(&bad, "coefficients = \"Z\"\np = 2\nf0 = \"2\"\n\n[[level]]\nvariables = [\"x\"]\nrelations = [\"x^^2\"]\n").unwrap();
    let o = run(&["check", bad.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains(":7:17:"), "{err}");

    let empty = dir.path().join("empty.tower");
    std::fs::write(&empty, "").unwrap();
    let o = run(&["check", empty.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing levels"));

    let o = run(&["check", "examples/torsion_pair.tower"], None);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["check", "no/such/file.tower"], None);
    assert_eq!(o.status.code(), Some(2));
}

fn quoted(items: &[String]) -> String {
    let parts: Vec<String> = items.iter().map(|s| format!("\"{s}\"")).collect();
    format!("[{}]", parts.join(", "))
}

fn render(text: &TowerText, semantics: ZariskianSemantics) -> String {
    let mut s = format!(
        "coefficients = \"{}\"\np = {}\nf0 = \"{}\"\nf1 = \"{}\"\nsemantics = \"{}\"\n",
        text.coeffs,
        text.p,
        text.f0,
        text.f1,
        semantics.name()
    );
    for (vars, rels) in text.vars.iter().zip(&text.relations) {
        s += &format!("\n[[level]]\nvariables = {}\nrelations = {}\n", quoted(vars), quoted(rels));
    }
    for images in &text.transitions {
        s += &format!("\n[[transition]]\nimages = {}\n", quoted(images));
    }
    s
}

/// `check` exits 1 exactly when some axiom, (g) or (g′) verdict fails.
#[test]
fn exit_status_contract_over_the_mutation_corpus() {
    let dir = tempfile::tempdir().unwrap();
    for semantics in [ZariskianSemantics::Computed, ZariskianSemantics::Declared] {
        for family in FAMILIES {
            let mut cases = vec![(None, corpus::family_text(family, 2))];
            cases.extend(MUTATIONS.iter().map(|&m| (Some(m), corpus::mutated_text(family, m, 2))));
            for (mutation, text) in cases {
                let path = dir.path().join("t.tower");
                std::fs::write(&path, render(&text, semantics)).unwrap();
                let o = run(&["check", path.to_str().unwrap()], None);
                let expect_fail = corpus::predicted(mutation, semantics)
                    .iter()
                    .any(|(c, v)| *c != "theorem-a" && *v == Verdict::Fail);
                let label = format!("{} {:?} {}", family.name(), mutation.map(|m| m.name()), semantics);
                assert_eq!(o.status.code(), Some(i32::from(expect_fail)), "{label}: {}", stdout(&o));
            }
        }
    }
}
