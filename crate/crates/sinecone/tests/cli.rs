use std::path::PathBuf;
use std::process::{Command, Output};

fn repo_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sinecone"))
        .args(args)
        .current_dir(repo_root())
        .env_remove("SINECONE_DATA_DIR")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr_json(o: &Output) -> serde_json::Value {
    let text = String::from_utf8(o.stderr.clone()).unwrap();
    serde_json::from_str(text.lines().last().expect("an error line")).unwrap()
}

#[test]
fn sphere_laplace_table() {
    let o = run(&["spectrum", "--input", "s3.json", "--operator", "laplace", "--cutoff", "100"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    // S^4: k(k+3) with multiplicity (k+1)(k+2)(2k+3)/6
    for (v, m) in [(0, 1), (4, 5), (10, 14), (18, 30), (28, 55), (40, 91), (54, 140), (70, 204), (88, 285)] {
        let row = format!("\n{v:<5}");
        let line = text.lines().find(|l| format!("\n{l}").starts_with(&row)).unwrap_or_else(|| panic!("{v}"));
        assert!(line.split_whitespace().nth(2) == Some(&m.to_string()), "{line}");
    }
}

#[test]
fn scan_products_table() {
    let o = run(&["scan-products", "--from", "4", "--to", "20", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 17);
    for r in rows {
        let n = r["n"].as_u64().unwrap();
        let status = r["status"].as_str().unwrap();
        match n {
            4..=8 => assert_eq!(status, "unbounded_below"),
            9 | 10 => assert_eq!(status, "ied"),
            _ => assert_eq!(status, "rigid", "n={n}"),
        }
    }
}

#[test]
fn verify_symbolic_passes() {
    let o = run(&["verify-symbolic", "--n", "3", "--k", "2", "--jmax", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("all residuals zero"));
}

#[test]
fn exit_codes() {
    let o = run(&["rigidity", "--input", "product:3x3"]);
    assert_eq!(o.status.code(), Some(3));
    let e = stderr_json(&o);
    assert_eq!(e["error"], "unbounded_below");
    assert!(e["message"].as_str().unwrap().contains("Hardy inequality"));

    let o = run(&["verify-radial", "--n", "9", "--block", "tt", "--value", "-16", "--targets=-24,-21,-16,-9,0"]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["spectrum", "--input", "no-such-base.json", "--cutoff", "10"]);
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(stderr_json(&o)["error"], "unknown_input");

    let o = run(&["spectrum", "--input", "sphere:3"]);
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(stderr_json(&o)["error"], "usage");

    // sphere data carries no 1-form spectrum
    let o = run(&["spectrum", "--input", "sphere:3", "--operator", "einstein", "--cutoff", "10"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stderr_json(&o)["error"], "insufficient_cutoff");
}

#[test]
fn invariant_violation_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"n": 5, "normalized": true, "cutoff": 40,
            "spec0": [{"value": 0, "mult": 1}, {"value": 5, "mult": 6}],
            "spec1D": [{"value": 3, "mult": 1}], "specE_TT": []}"#,
    )
    .unwrap();
    let o = run(&["spectrum", "--input", path.to_str().unwrap(), "--cutoff", "10"]);
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(stderr_json(&o)["error"], "invariant_violation");
}

#[test]
fn data_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::create_dir(dir.path().join("user")).unwrap();
    std::fs::copy(repo_root().join("data/spheres/s2.json"), dir.path().join("user/mine.json")).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_sinecone"))
        .args(["spectrum", "--input", "mine.json", "--cutoff", "12", "--format", "json"])
        .env("SINECONE_DATA_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["cone_dimension"], 3);
}

#[test]
fn output_is_deterministic_and_builtins_match_files() {
    let args = ["spectrum", "--input", "sphere:4", "--cutoff", "60", "--format", "json"];
    let a = stdout(&run(&args));
    assert_eq!(a, stdout(&run(&args)));
    let f = stdout(&run(&["spectrum", "--input", "s4.json", "--cutoff", "60", "--format", "json"]));
    assert_eq!(a, f);
}

#[test]
fn stability_of_nine_dimensional_product() {
    let o = run(&["stability", "--input", "product:4x5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["consistent"], true);
    let physical = &v["cone_direct"]["notions"][3];
    assert_eq!(physical["notion"], "physical");
    assert_eq!(physical["verdict"], "stable");
    assert_eq!(physical["witness_value"]["a"], "-20");
}

#[test]
fn radial_and_rayleigh() {
    let o = run(&["verify-radial", "--input", "product:4x5", "--block", "tt", "--value", "-16", "--modes", "5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let targets: Vec<f64> = v["modes"].as_array().unwrap().iter().map(|m| m["target"].as_f64().unwrap()).collect();
    assert_eq!(targets, [-20.0, -18.0, -14.0, -8.0, 0.0]);

    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("q.csv");
    let o = run(&["verify-radial", "--n", "8", "--kappa", "-14", "--csv", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(csv).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.starts_with("eps,quotient,eps2_quotient\n"));
}

#[test]
fn iterate_round_trips_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s5.json");
    let o = run(&["iterate", "--input", "s3.json", "--iterations", "2", "--cutoff", "40", "--output", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let loaded = sinecone::files::load_geometric_spectrum(&out, true).unwrap();
    let s5 = sinecone_core::catalog::sphere_functions(5, &sinecone_core::exactreal::QuadReal::integer(40));
    assert_eq!(loaded.spectrum.spec0, s5);
}

#[test]
fn help_exits_zero() {
    let o = run(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("scan-products"));
}
