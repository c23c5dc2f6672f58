//! End-to-end tests of the `hkit` binary: exit codes, report shapes,
//! option layering, and generate/split round trips, all through real
//! manifest files on disk.

use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn hkit() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hkit"));
    cmd.env_remove("HKIT_MAX_DIM");
    cmd
}

fn run(cmd: &mut Command) -> (Option<i32>, String, String) {
    let Output { status, stdout, stderr } = cmd.output().expect("binary runs");
    (
        status.code(),
        String::from_utf8(stdout).expect("stdout is utf-8"),
        String::from_utf8(stderr).expect("stderr is utf-8"),
    )
}

fn write_manifest(dir: &Path, name: &str, value: &Value) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(value).unwrap()).unwrap();
    path
}

fn mat(entries: &[&[&str]]) -> Value {
    json!({
        "dim": entries.len(),
        "entries": entries.iter().map(|r| r.to_vec()).collect::<Vec<_>>(),
    })
}

fn isometry_manifest(n: u32) -> Value {
    json!({
        "relation": "n-inverse",
        "n": n,
        "operands": {
            "s": mat(&[&["1", "0"], &["1", "1"]]),
            "t": mat(&[&["1", "1"], &["0", "1"]]),
        },
    })
}

fn tensor_product_manifest(n: u32) -> Value {
    json!({
        "relation": "n-inverse",
        "delta": "tensor-product",
        "n": n,
        "operands": {
            "s1": mat(&[&["1", "1"], &["0", "1"]]),
            "t1": mat(&[&["1/2", "0"], &["0", "1/2"]]),
            "s2": mat(&[&["1"]]),
            "t2": mat(&[&["2"]]),
        },
    })
}

fn sqrt2_manifest(extra_options: Option<Value>) -> Value {
    let mut m = json!({
        "relation": "general:x*y^2 - 2",
        "delta": "tensor-product",
        "n": 1,
        "operands": {
            "s1": mat(&[&["1"]]),
            "t1": mat(&[&["1"]]),
            "s2": mat(&[&["2"]]),
            "t2": mat(&[&["1"]]),
        },
    });
    if let Some(options) = extra_options {
        m["options"] = options;
    }
    m
}

#[test]
fn unreadable_or_malformed_manifests_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, err) = run(hkit().arg("check").arg(dir.path().join("absent.json")));
    assert_eq!(code, Some(2));
    assert!(err.starts_with("error:"), "diagnostics go to stderr: {err}");

    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{ not json").unwrap();
    let (code, _, _) = run(hkit().arg("check").arg(&path));
    assert_eq!(code, Some(2));

    let rejected = [
        json!({"relation": "n-inverse", "n": 1, "operands": {}, "bogus": 1}),
        json!({"relation": "n-inverse", "n": 0, "operands": {}}),
        json!({"relation": "n-inverse", "n": 1, "operands": {}, "options": {"warp": 9}}),
        json!({"relation": "no-such-relation", "n": 1,
               "operands": {"s": mat(&[&["1"]]), "t": mat(&[&["1"]])}}),
        json!({"relation": "n-inverse", "n": 1,
               "operands": {"s": mat(&[&["1"]]), "q": mat(&[&["1"]])}}),
    ];
    for (i, value) in rejected.iter().enumerate() {
        let path = write_manifest(dir.path(), &format!("bad{i}.json"), value);
        let (code, _, err) = run(hkit().arg("check").arg(&path));
        assert_eq!(code, Some(2), "manifest {i} must be rejected: {err}");
    }
}

#[test]
fn check_reports_strict_orders() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_manifest(dir.path(), "iso3.json", &isometry_manifest(3));
    let (code, out, _) = run(hkit().arg("check").arg(&path));
    assert_eq!(code, Some(0));
    let report: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["holds"], true);
    assert_eq!(report["strict_order"], 3);
    assert_eq!(report["residual_frobenius_sqr"], "0");

    let path = write_manifest(dir.path(), "iso2.json", &isometry_manifest(2));
    let (code, out, _) = run(hkit().arg("check").arg(&path));
    assert_eq!(code, Some(1));
    let report: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["holds"], false);
    assert_eq!(report["residual_frobenius_sqr"], "4");
}

#[test]
fn check_accepts_adjoint_shorthand() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = json!({
        "relation": "nsym",
        "n": 3,
        "operands": {"t": mat(&[&["0", "1"], &["0", "0"]])},
    });
    let path = write_manifest(dir.path(), "nsym.json", &manifest);
    let (code, out, _) = run(hkit().arg("check").arg(&path));
    assert_eq!(code, Some(0));
    let report: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["holds"], true);
    assert_eq!(report["strict_order"], 3);
}

#[test]
fn check_loads_matrices_from_relative_paths() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("t.json"),
        serde_json::to_string(&mat(&[&["1", "1"], &["0", "1"]])).unwrap(),
    )
    .unwrap();
    let manifest = json!({
        "relation": "n-inverse",
        "n": 3,
        "operands": {"s": mat(&[&["1", "0"], &["1", "1"]]), "t": "t.json"},
    });
    let path = write_manifest(dir.path(), "paths.json", &manifest);
    let (code, out, _) = run(hkit().arg("check").arg(&path));
    assert_eq!(code, Some(0), "matrix paths resolve against the manifest dir");
    let report: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["strict_order"], 3);
}

#[test]
fn split_finds_the_reference_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_manifest(dir.path(), "tp.json", &tensor_product_manifest(2));
    let (code, out, _) = run(hkit().arg("split").arg(&path));
    assert_eq!(code, Some(0));
    let witness: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(witness["lambda"], "2");
    assert_eq!(witness["l"], 2);
    assert_eq!(witness["m"], 1);
    assert_eq!(witness["verified"], "exact");
    assert_eq!(witness["relation"], "n-inverse");
    assert_eq!(witness["delta"], "tensor-product");
}

#[test]
fn split_rejects_unsatisfied_relations() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_manifest(dir.path(), "tp1.json", &tensor_product_manifest(1));
    let (code, _, err) = run(hkit().arg("split").arg(&path));
    assert_eq!(code, Some(1), "combined defect is nonzero at n = 1: {err}");
}

#[test]
fn split_requires_a_delta_and_helton_for_tensor_sums() {
    let dir = tempfile::tempdir().unwrap();
    let mut manifest = isometry_manifest(3);
    manifest["operands"] = json!({
        "s1": mat(&[&["1"]]), "t1": mat(&[&["1"]]),
        "s2": mat(&[&["1"]]), "t2": mat(&[&["1"]]),
    });
    let path = write_manifest(dir.path(), "nodelta.json", &manifest);
    let (code, _, _) = run(hkit().arg("split").arg(&path));
    assert_eq!(code, Some(2), "split needs a delta");

    manifest["delta"] = json!("tensor-sum");
    let path = write_manifest(dir.path(), "wrongrel.json", &manifest);
    let (code, _, err) = run(hkit().arg("split").arg(&path));
    assert_eq!(code, Some(2));
    assert!(err.contains("helton"), "diagnostic names the supported relation: {err}");
}

#[test]
fn numeric_witnesses_are_gated_by_the_fallback_switch() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_manifest(dir.path(), "sqrt2.json", &sqrt2_manifest(None));
    let (code, out, _) = run(hkit().arg("split").arg(&path));
    assert_eq!(code, Some(3), "numeric witnesses exit 3");
    let witness: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(witness["verified"], "numeric");
    assert!(witness["lambda"]["residual"].as_f64().unwrap() < 1e-9);

    let (code, _, _) = run(hkit().arg("split").arg(&path).args(["--numeric-fallback", "off"]));
    assert_eq!(code, Some(4), "with the fallback off there is no witness");

    // Manifest options say off; nothing on the command line.
    let off = sqrt2_manifest(Some(json!({"numeric_fallback": false})));
    let path = write_manifest(dir.path(), "sqrt2_off.json", &off);
    let (code, _, _) = run(hkit().arg("split").arg(&path));
    assert_eq!(code, Some(4));

    // The flag has the last word over the manifest.
    let (code, out, _) = run(hkit().arg("split").arg(&path).args(["--numeric-fallback", "on"]));
    assert_eq!(code, Some(3));
    let witness: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(witness["verified"], "numeric");
}

#[test]
fn dimension_caps_layer_env_under_manifest_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let eye3: Vec<Vec<&str>> = (0..3)
        .map(|i| (0..3).map(|j| if i == j { "1" } else { "0" }).collect())
        .collect();
    let eye3: Vec<&[&str]> = eye3.iter().map(|r| r.as_slice()).collect();
    let manifest = json!({
        "relation": "n-inverse",
        "delta": "tensor-product",
        "n": 1,
        "operands": {
            "s1": mat(&eye3), "t1": mat(&eye3),
            "s2": mat(&eye3), "t2": mat(&eye3),
        },
    });
    let path = write_manifest(dir.path(), "big.json", &manifest);

    // Combined dimension 9 exceeds the default cap of 8.
    let (code, _, err) = run(hkit().arg("check").arg(&path));
    assert_eq!(code, Some(2));
    assert!(err.contains("HKIT_MAX_DIM"), "diagnostic mentions the env knob: {err}");

    let (code, out, _) = run(hkit().arg("check").arg(&path).env("HKIT_MAX_DIM", "16"));
    assert_eq!(code, Some(0), "raising the cap admits the instance");
    let report: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["holds"], true);

    let (code, _, _) = run(hkit().arg("check").arg(&path).env("HKIT_MAX_DIM", "not a number"));
    assert_eq!(code, Some(2));

    // A manifest max_dim overrides the environment.
    let mut capped = manifest.clone();
    capped["options"] = json!({"max_dim": 4});
    let path = write_manifest(dir.path(), "capped.json", &capped);
    let (code, _, _) = run(hkit().arg("check").arg(&path).env("HKIT_MAX_DIM", "16"));
    assert_eq!(code, Some(2));
}

#[test]
fn order_caps_apply_to_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_manifest(dir.path(), "iso3.json", &isometry_manifest(3));
    let (code, _, _) = run(hkit().arg("check").arg(&path).args(["--cap", "2"]));
    assert_eq!(code, Some(2), "n above the cap is refused");

    let mut capped = isometry_manifest(3);
    capped["options"] = json!({"cap": 2});
    let path = write_manifest(dir.path(), "iso3_capped.json", &capped);
    let (code, _, _) = run(hkit().arg("check").arg(&path));
    assert_eq!(code, Some(2));
    let (code, _, _) = run(hkit().arg("check").arg(&path).args(["--cap", "8"]));
    assert_eq!(code, Some(0), "the flag overrides the manifest cap");
}

#[test]
fn generate_then_split_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = run(hkit().args([
        "generate",
        "--relation",
        "helton",
        "--delta",
        "tensor-sum",
        "--l",
        "2",
        "--m",
        "2",
        "--lambda",
        "-1/2",
        "--seed",
        "11",
    ]));
    assert_eq!(code, Some(0));
    let bundle: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(bundle["witness"]["lambda"], "-1/2");
    assert_eq!(bundle["manifest"]["n"], 3);

    let path = write_manifest(dir.path(), "gen.json", &bundle["manifest"]);
    let (code, out, _) = run(hkit().arg("check").arg(&path));
    assert_eq!(code, Some(0));
    let report: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["strict_order"], 3);

    let (code, out, _) = run(hkit().arg("split").arg(&path));
    assert_eq!(code, Some(0));
    let witness: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(witness["verified"], "exact");
    assert_eq!(
        witness["l"].as_u64().unwrap() + witness["m"].as_u64().unwrap(),
        4,
        "split order plus one"
    );
}

#[test]
fn generate_covers_adjoint_families_and_out_files() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("bundle.json");
    let (code, out, _) = run(hkit()
        .args(["generate", "--relation", "nsym", "--l", "1", "--m", "3", "--seed", "5"])
        .arg("--out")
        .arg(&out_path));
    assert_eq!(code, Some(0));
    assert!(out.is_empty(), "--out suppresses stdout");
    let bundle: Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(bundle["manifest"]["relation"], "nsym");
    assert_eq!(bundle["manifest"]["delta"], "tensor-product");

    let path = write_manifest(dir.path(), "nsym.json", &bundle["manifest"]);
    let (code, out, _) = run(hkit().arg("split").arg(&path));
    assert_eq!(code, Some(0));
    let witness: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(witness["verified"], "exact");

    // Requested orders must be at least one, and the generator refuses
    // shapes it cannot build.
    let (code, _, _) = run(hkit().args(["generate", "--relation", "nsym", "--l", "2", "--m", "1"]));
    assert_eq!(code, Some(2), "even adjoint orders are not generable");
    let (code, _, _) = run(hkit().args([
        "generate",
        "--relation",
        "n-inverse",
        "--delta",
        "tensor-sum",
        "--l",
        "1",
        "--m",
        "1",
    ]));
    assert_eq!(code, Some(2), "no tensor-sum generator for n-inverse");
    let (code, _, _) =
        run(hkit().args(["generate", "--relation", "n-inverse", "--l", "1", "--m", "1"]));
    assert_eq!(code, Some(2), "plain relations need an explicit delta");
}

#[test]
fn classify_reports_weights_or_rejects() {
    let (code, out, _) = run(hkit().args(["classify", "x*y - 1"]));
    assert_eq!(code, Some(0));
    let report: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["quasi_homogeneous"], true);
    assert_eq!(report["weights"], json!([1, -1]));
    assert_eq!(report["quasi_degree"], 0);

    let (code, out, _) = run(hkit().args(["classify", "x^2*y^3 - 5"]));
    assert_eq!(code, Some(0));
    let report: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["weights"], json!([3, -2]));

    let (code, out, _) = run(hkit().args(["classify", "x*y - x - 1"]));
    assert_eq!(code, Some(0));
    let report: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["quasi_homogeneous"], false);
    assert!(report.get("weights").is_none());

    let (code, _, _) = run(hkit().args(["classify", "x*y -"]));
    assert_eq!(code, Some(2), "parse errors exit 2");
    let (code, _, _) = run(hkit().args(["classify", "0"]));
    assert_eq!(code, Some(2), "the zero polynomial has no class");
}

#[test]
fn certify_builds_verified_certificates() {
    let (code, out, _) = run(hkit().args(["certify", "x*y - 1", "--lambda", "2"]));
    assert_eq!(code, Some(0));
    let cert: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(cert["kind"], "tensor-product");

    let (code, _, _) = run(hkit().args([
        "certify",
        "x - y",
        "--delta",
        "tensor-sum",
        "--lambda",
        "3/4",
    ]));
    assert_eq!(code, Some(0));

    let (code, _, err) = run(hkit().args(["certify", "x*y - x - 1"]));
    assert_eq!(code, Some(2));
    assert!(err.contains("not certifiable"), "stderr explains: {err}");

    let (code, _, _) = run(hkit().args(["certify", "x*y - 1", "--lambda", "0"]));
    assert_eq!(code, Some(2), "a zero scalar cannot witness a product split");

    let (code, _, _) = run(hkit().args(["certify", "x*y - 1", "--lambda", "bogus"]));
    assert_eq!(code, Some(2));
}

#[test]
fn usage_errors_exit_2() {
    let (code, _, _) = run(hkit().arg("split"));
    assert_eq!(code, Some(2), "missing manifest argument");
    let (code, _, _) = run(hkit().arg("no-such-command"));
    assert_eq!(code, Some(2));
}
