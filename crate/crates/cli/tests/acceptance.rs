//! Acceptance suite for the command-line surface: byte-level determinism
//! of emitted specs and JSON reports, and reference comparison through the
//! actual binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_morsefib"))
}

fn run(args: &[&str]) -> Output {
    binary()
        .args(args)
        .output()
        .expect("binary runs to completion")
}

fn fixture_names() -> Vec<String> {
    morsefib::catalog::names()
}

/// Emit → pages --format json twice is byte-identical, and compare passes
/// on every catalog fixture.
#[test]
fn criterion_10_cli_determinism_and_compare() {
    let dir = tempfile::tempdir().expect("temp dir");
    for name in fixture_names() {
        let emit_a = run(&["catalog", "emit", &name]);
        let emit_b = run(&["catalog", "emit", &name]);
        assert!(emit_a.status.success(), "{name}: emit failed");
        assert_eq!(emit_a.stdout, emit_b.stdout, "{name}: emit not byte-stable");

        let path: PathBuf = dir.path().join(format!("{name}.json"));
        std::fs::write(&path, &emit_a.stdout).expect("write spec");
        let path_str = path.to_str().unwrap();

        let pages_a = run(&["pages", path_str, "--format", "json"]);
        let pages_b = run(&["pages", path_str, "--format", "json"]);
        assert!(pages_a.status.success(), "{name}: pages failed");
        assert_eq!(
            pages_a.stdout, pages_b.stdout,
            "{name}: pages --format json not byte-stable"
        );
        let report: serde_json::Value =
            serde_json::from_slice(&pages_a.stdout).expect("pages emits valid JSON");
        assert_eq!(report["name"], name.as_str());
        assert_eq!(report["checks"]["d_squared"]["status"], "pass");

        let compare = run(&["compare", path_str]);
        assert!(
            compare.status.success(),
            "{name}: compare failed:\n{}",
            String::from_utf8_lossy(&compare.stdout)
        );
    }
    println!("acceptance 10 (CLI determinism and compare on all fixtures): PASS");
}

#[test]
fn check_exits_nonzero_on_broken_specs() {
    let dir = tempfile::tempdir().expect("temp dir");
    let emit = run(&["catalog", "emit", "hopf"]);
    let text = String::from_utf8(emit.stdout).unwrap();
    // break the chain-map condition: retarget the shift-1 transport entry
    let broken = text.replace(
        "\"components\": {\n        \"0\": {\n          \"rows\": 1,\n          \"cols\": 1,",
        "\"components\": {\n        \"1\": {\n          \"rows\": 0,\n          \"cols\": 1,",
    );
    assert_ne!(text, broken, "substitution must hit");
    let path = dir.path().join("broken.json");
    std::fs::write(&path, &broken).unwrap();
    let out = run(&["check", path.to_str().unwrap()]);
    // shape errors surface as parse failures with located messages
    assert!(!out.status.success());
}

#[test]
fn structure_equation_failure_is_a_report_not_a_crash() {
    let dir = tempfile::tempdir().expect("temp dir");
    // interval fibers with a transport violating the operator equation
    let text = r#"{
  "name": "violates",
  "base": [
    {"id": "m", "index": 0},
    {"id": "M", "index": 2}
  ],
  "fibers": {
    "M": {
      "generators": {"0": ["a", "b"], "1": ["e"]},
      "differentials": {"1": {"rows": 2, "cols": 1, "entries": [[0, 0], [1, 0]]}}
    },
    "m": {
      "generators": {"0": ["a", "b"], "1": ["e"]},
      "differentials": {"1": {"rows": 2, "cols": 1, "entries": [[0, 0], [1, 0]]}}
    }
  },
  "transports": [
    {
      "from": "M",
      "to": "m",
      "shift": 1,
      "components": {"0": {"rows": 1, "cols": 2, "entries": [[0, 0]]}}
    }
  ]
}
"#;
    let path = dir.path().join("violates.json");
    std::fs::write(&path, text).unwrap();
    let out = run(&["check", path.to_str().unwrap()]);
    assert!(!out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("structure equation"), "{stdout}");
    assert!(stdout.contains("FAIL"), "{stdout}");
    // pages on the same file: failed-check report, exit 1, no panic
    let pages = run(&["pages", path.to_str().unwrap(), "--format", "json"]);
    assert!(!pages.status.success());
    let report: serde_json::Value = serde_json::from_slice(&pages.stdout).unwrap();
    assert_eq!(report["checks"]["structure_equation"]["status"], "fail");
}

#[test]
fn catalog_list_names_every_fixture() {
    let out = run(&["catalog", "list"]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    for name in fixture_names() {
        assert!(stdout.contains(&name), "missing {name}");
    }
}

#[test]
fn parameterized_emit() {
    let out = run(&["catalog", "emit", "s2-pathloop", "--param", "4"]);
    assert!(out.status.success());
    let parsed =
        morsefib::parse_spec(&String::from_utf8(out.stdout).unwrap()).expect("emitted spec parses");
    assert_eq!(parsed.name, "s2-pathloop-4");
    assert_eq!(parsed.truncation_degree, Some(4));
}

#[test]
fn e2_subcommand_cross_checks() {
    let dir = tempfile::tempdir().expect("temp dir");
    for name in ["hopf", "rp2-lifted"] {
        let emit = run(&["catalog", "emit", name]);
        let path = dir.path().join(format!("{name}.json"));
        std::fs::write(&path, &emit.stdout).unwrap();
        let out = run(&["e2", path.to_str().unwrap()]);
        assert!(out.status.success(), "{name}");
        let stdout = String::from_utf8_lossy(&out.stdout);
        assert!(stdout.contains("match"), "{name}: {stdout}");
    }
}
