//! End-to-end runs of the `polycx` binary.

use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn polycx(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polycx")).env("POLYCX_CACHE_DIR", cache).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn surface_invariants() {
    let dir = TempDir::new().unwrap();
    let out = polycx(dir.path(), &["surface", "0,0:5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "E=2 F=3 exceptional=false");
    let out = polycx(dir.path(), &["surface", "0,3:"]);
    assert_eq!(stdout(&out).trim(), "E=3 F=2 exceptional=true");
}

#[test]
fn malformed_signature_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let out = polycx(dir.path(), &["surface", "0,0:5+"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("position"));
    assert_eq!(polycx(dir.path(), &["enumerate", "0,0:5", "--mode", "ball"]).status.code(), Some(2));
    assert_eq!(polycx(dir.path(), &["frobnicate"]).status.code(), Some(2));
}

#[test]
fn vertex_cap_is_a_resource_error() {
    let dir = TempDir::new().unwrap();
    let out = polycx(dir.path(), &["enumerate", "0,0:7", "--cap", "10", "--no-cache"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn enumeration_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    let cache_a = dir.path().join("cache-a");
    assert!(polycx(&cache_a, &["enumerate", "0,0:6", "--out", a.to_str().unwrap()]).status.success());
    assert!(polycx(&dir.path().join("cache-b"), &["enumerate", "0,0:6", "--out", b.to_str().unwrap()]).status.success());
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["vertices"].as_array().unwrap().len(), 45);
    assert_eq!(doc["format_version"], "polycx/1");
    // the cached copy is served on the next run
    assert_eq!(std::fs::read_dir(&cache_a).unwrap().count(), 1);
    let again = polycx(&cache_a, &["enumerate", "0,0:6"]);
    assert_eq!(stdout(&again), text);
}

#[test]
fn ball_around_an_infinite_path() {
    let dir = TempDir::new().unwrap();
    let out = polycx(dir.path(), &["enumerate", "0,0:1+1", "--mode", "ball", "--radius", "3"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["vertices"].as_array().unwrap().len(), 7);
    assert_eq!(doc["edges"].as_array().unwrap().len(), 6);
}

#[test]
fn dot_exports() {
    let dir = TempDir::new().unwrap();
    let pentagon = dir.path().join("p.json");
    let hexagon = dir.path().join("h.json");
    polycx(dir.path(), &["enumerate", "0,0:5", "--out", pentagon.to_str().unwrap()]);
    polycx(dir.path(), &["enumerate", "0,0:6", "--out", hexagon.to_str().unwrap()]);

    let dot = stdout(&polycx(dir.path(), &["export", pentagon.to_str().unwrap()]));
    assert_eq!(dot.matches("fillcolor=red").count(), 5);
    assert_eq!(dot.matches("fillcolor=blue").count(), 5);
    assert_eq!(dot.matches("fillcolor=green").count(), 1);

    let out = dir.path().join("cr.dot");
    let run = polycx(dir.path(), &["export", hexagon.to_str().unwrap(), "--what", "crossing", "--out", out.to_str().unwrap()]);
    assert!(run.status.success());
    let crossing = std::fs::read_to_string(out).unwrap();
    assert_eq!(crossing.lines().filter(|l| l.trim_end().ends_with(';') && !l.contains("--")).count(), 9);

    // every hexagon carrier has 9 or 11 members; the long chords give 9
    let mut sizes = Vec::new();
    for arc in 0..9 {
        let what = format!("hyperplane:a{arc}");
        let dot = stdout(&polycx(dir.path(), &["export", hexagon.to_str().unwrap(), "--what", &what]));
        sizes.push((dot.matches("[label=").count(), dot.matches(" -- ").count()));
    }
    sizes.sort_unstable();
    assert_eq!(sizes, [(9, 12), (9, 12), (9, 12), (11, 15), (11, 15), (11, 15), (11, 15), (11, 15), (11, 15)]);

    let bad = polycx(dir.path(), &["export", hexagon.to_str().unwrap(), "--what", "hyperplane:a99"]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(polycx(dir.path(), &["export", hexagon.to_str().unwrap(), "--what", "nonsense"]).status.code(), Some(2));
}

#[test]
fn verify_passes_and_detects_corruption() {
    let dir = TempDir::new().unwrap();
    let out = polycx(dir.path(), &["verify", "0,0:6", "--suite", "all"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let out = polycx(dir.path(), &["verify", "0,1:3", "--suite", "all", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["totals"]["fail"], 0);

    let path = dir.path().join("p.json");
    polycx(dir.path(), &["enumerate", "0,0:5", "--out", path.to_str().unwrap()]);
    assert_eq!(polycx(dir.path(), &["verify", "--input", path.to_str().unwrap()]).status.code(), Some(0));

    // relabel one edge with an arc it does not add, then refresh the digest
    let mut doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let first = doc["edges"][0]["arc"].clone();
    let other = doc["arcs"].as_array().unwrap().iter().map(|a| a["id"].clone()).find(|id| *id != first).unwrap();
    doc["edges"][0]["arc"] = other;
    doc["content_digest"] = serde_json::Value::String(String::new());
    let digest = polycx_core::io::ComplexDocument::compute_digest(&serde_json::from_value(doc.clone()).unwrap());
    doc["content_digest"] = serde_json::Value::String(digest);
    std::fs::write(&path, serde_json::to_string_pretty(&doc).unwrap()).unwrap();
    let out = polycx(dir.path(), &["verify", "--input", path.to_str().unwrap(), "--suite", "cubes"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("[                     fail] edge-symmetric-difference"), "{text}");
    assert!(text.contains("counterexample"));
}

#[test]
fn curvature_and_distances() {
    let dir = TempDir::new().unwrap();
    let out = polycx(dir.path(), &["curvature", "0,0:2+1", "--mode", "ball", "--radius", "5", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let sizes: Vec<usize> = value["vertices"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|v| v["systems"].as_array().unwrap().iter().map(|s| s["arcs"].as_array().unwrap().len()))
        .collect();
    assert_eq!(sizes, [3]);
    let out = polycx(dir.path(), &["distances", "0,0:6"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("quasi-isometry-bounds"));
}
