use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qstereo(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qstereo"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("run qstereo")
}

fn off_header(path: &Path) -> (usize, usize) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("OFF"));
    let v: Vec<usize> = lines.next().unwrap().split_whitespace().map(|x| x.parse().unwrap()).collect();
    (v[0], v[1])
}

#[test]
fn bounds_writes_json_and_markdown() {
    let dir = tempfile::tempdir().unwrap();
    let out = qstereo(dir.path(), &["bounds", "--group", "P2_1_3"]);
    // 0 when the reference value is reproduced, 2 on a mismatch.
    let code = out.status.code().unwrap();
    assert!(code == 0 || code == 2, "{}", String::from_utf8_lossy(&out.stderr));
    let json: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/bounds.json")).unwrap()).unwrap();
    let g = &json["groups"][0];
    assert_eq!(g["group"], "P2_13");
    assert_eq!(g["golden_final"], 69);
    let names: Vec<&str> = g["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"P2_13 final"));
    assert_eq!(code == 0, g["final_bound"] == 69);
    let md = std::fs::read_to_string(dir.path().join("out/bounds.md")).unwrap();
    assert!(md.starts_with("| Group |"));
}

#[test]
fn cached_rerun_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["bounds", "--group", "Pa-3", "--group", "I2_13", "--out", "o"];
    qstereo(dir.path(), &args);
    let first = std::fs::read(dir.path().join("o/bounds.json")).unwrap();
    qstereo(dir.path(), &args);
    let second = std::fs::read(dir.path().join("o/bounds.json")).unwrap();
    assert_eq!(first, second);
    let meta: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("o/meta.json")).unwrap()).unwrap();
    assert_eq!(meta["cache_misses"], 0);
    let mut uncached: Vec<&str> = args.to_vec();
    uncached.push("--no-cache");
    qstereo(dir.path(), &uncached);
    assert_eq!(first, std::fs::read(dir.path().join("o/bounds.json")).unwrap());
}

#[test]
fn no_projection_drops_column_four() {
    let dir = tempfile::tempdir().unwrap();
    qstereo(dir.path(), &["bounds", "--group", "Ia-3", "--no-projection"]);
    let json: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/bounds.json")).unwrap()).unwrap();
    let cols: Vec<&str> = json["groups"][0]["columns"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["column"].as_str().unwrap())
        .collect();
    assert_eq!(cols, ["1", "2"]);
}

#[test]
fn custom_stages_compare_with_matching_column() {
    let dir = tempfile::tempdir().unwrap();
    qstereo(dir.path(), &["bounds", "--group", "I4_1_32", "--stages", "S1,S2,S3"]);
    let json: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/bounds.json")).unwrap()).unwrap();
    let c = &json["groups"][0]["columns"][0];
    assert_eq!(c["column"], "custom");
    assert_eq!(c["golden"], 264);
    assert!(json["global"].is_null());
}

#[test]
fn config_file_selects_groups() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("run.toml"), "groups = [\"P2_13\"]\nout_dir = \"fromcfg\"\ncache = false\n").unwrap();
    qstereo(dir.path(), &["--config", "run.toml", "bounds"]);
    let json: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("fromcfg/bounds.json")).unwrap()).unwrap();
    assert_eq!(json["groups"].as_array().unwrap().len(), 1);
    assert!(!dir.path().join(".qstereo-cache").exists());
}

#[test]
fn data_errors_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(qstereo(dir.path(), &["bounds", "--group", "P6"]).status.code(), Some(4));
    assert_eq!(qstereo(dir.path(), &["bounds", "--group", "P2_13", "--stages", "S4"]).status.code(), Some(4));
    assert_eq!(qstereo(dir.path(), &["bounds", "--group", "P2_13", "--stages", "S9"]).status.code(), Some(4));
}

#[test]
fn exports() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert!(qstereo(p, &["export", "prototile", "--tile", "A", "--out", "a.off"]).status.success());
    assert_eq!(off_header(&p.join("a.off")).0, 6);
    assert!(qstereo(p, &["export", "octahedron", "--out", "o.off"]).status.success());
    assert_eq!(off_header(&p.join("o.off")), (24, 14));
    assert!(qstereo(p, &["export", "cell", "--group", "NQ", "--base", "0,0,0", "--allow-stabilizer", "--out", "c.off"])
        .status
        .success());
    assert_eq!(off_header(&p.join("c.off")), (24, 14));
    assert!(!qstereo(p, &["export", "cell", "--group", "NQ", "--base", "0,0,0", "--out", "d.off"]).status.success());
    assert!(qstereo(p, &["export", "region", "--group", "P2_13", "--tile", "C", "--format", "json", "--out", "r.json"])
        .status
        .success());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(p.join("r.json")).unwrap()).unwrap();
    let stages = r["stages"].as_array().unwrap();
    assert_eq!(stages[0]["remaining"], 3072);
    assert_eq!(stages.last().unwrap()["remaining"], r["survivors"].as_array().unwrap().len());
    assert!(qstereo(p, &["export", "audit", "--group", "Pa-3", "--tile", "A", "--axis", "z", "--out", "z.svg"])
        .status
        .success());
    assert!(std::fs::read_to_string(p.join("z.svg")).unwrap().starts_with("<svg"));
}

#[test]
fn oracle_passes_for_small_groups() {
    let dir = tempfile::tempdir().unwrap();
    let out = qstereo(dir.path(), &["oracle", "--group", "P2_13", "--samples", "3", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let json: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/oracle.json")).unwrap()).unwrap();
    assert_eq!(json[0]["samples"], 12);
    assert!(json[0]["violations"].as_array().unwrap().is_empty());
}
