use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn spbw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spbw")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("spbw-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn mul_in_the_quantum_plane() {
    let o = spbw(&["mul", "--preset", "qplane5", "y", "x"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "(2)*x*y");
}

#[test]
fn ann_subsets_verifies() {
    let o = spbw(&["verify", "--preset", "f4z2-ext", "--thm", "ann-subsets", "--trials", "20", "--seed", "7", "--degree", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn strict_compatibility_fails_on_s2z4() {
    let json = scratch("compat.json");
    let o = spbw(&["check-compat", "--preset", "s2z4", "--mode", "both", "--json", json.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let text = doc["results"].to_string();
    assert!(text.contains("\"weak_sigma\":true"), "{text}");
    assert!(text.contains("\"sigma_compatible\":false"), "{text}");
    assert!(text.contains("s3"), "{text}");
}

#[test]
fn presentation_files_are_read() {
    let file = scratch("plane.spbw");
    std::fs::write(&file, "ring F = GF(5);\nextension A over F {\n  vars x, y;\n  y*x = 3*x*y + 1;\n}\n").unwrap();
    let o = spbw(&["mul", "--file", file.to_str().unwrap(), "y", "x*x"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "(4)*x^2*y + (4)*x");
    let o = spbw(&["mul", "--file", scratch("missing.spbw").to_str().unwrap(), "x", "y"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn diagnostics_carry_positions() {
    let file = scratch("bad.spbw");
    std::fs::write(&file, "ring F = GF(5);\nextension A over F {\n  vars x, y;\n  x*y = y*x;\n}\n").unwrap();
    let o = spbw(&["ring-info", "--file", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stdout(&o) + &String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("4:"), "{err}");
}

#[test]
fn cap_comes_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_spbw"))
        .args(["ring-info", "--preset", "f4z2"])
        .env("SPBW_CAP", "8")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(spbw(&["ring-info", "--preset", "f4z2"]).status.code(), Some(0));
}

#[test]
fn nass_json_on_the_matrix_preset() {
    let json = scratch("nass.json");
    let o = spbw(&["nass", "--preset", "mat-kt2", "--json", json.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&json).unwrap();
    let doc: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["schema_version"], 1);
    assert!(doc["input_digest"].as_str().unwrap().starts_with("sha256:"));
    let primes = doc["results"][0]["primes"].as_array().unwrap();
    assert_eq!(primes.len(), 1);

    let again = scratch("nass2.json");
    spbw(&["nass", "--preset", "mat-kt2", "--json", again.to_str().unwrap()]);
    let other: Value = serde_json::from_str(&std::fs::read_to_string(&again).unwrap()).unwrap();
    assert_eq!(doc["results"], other["results"]);
}

#[test]
fn every_preset_has_ring_info() {
    let list = stdout(&spbw(&["presets"]));
    let names: Vec<&str> = list.lines().filter_map(|l| l.split_whitespace().next()).collect();
    assert!(names.len() >= 13, "{list}");
    for name in names {
        let o = spbw(&["ring-info", "--preset", name]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn confluence_verdicts() {
    assert_eq!(spbw(&["verify", "--preset", "usoq3-gf9", "--thm", "confluence"]).status.code(), Some(0));
    assert_eq!(spbw(&["verify", "--preset", "broken-zyx", "--thm", "confluence"]).status.code(), Some(1));
}
