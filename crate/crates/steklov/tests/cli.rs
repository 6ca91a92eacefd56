use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use steklov::report::{CsvRow, VerificationReport};
use steklov::{verify, SpecFile, VerifyOptions};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_steklov"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn last_json(out: &Output) -> serde_json::Value {
    let text = String::from_utf8_lossy(&out.stdout);
    serde_json::from_str(text.lines().last().expect("output")).expect("json line")
}

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn write_spec(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

const DISK: &str = r#"{"name": "disk", "geometry": {"type": "disk", "radius": 1},
    "ambient": {"model": "euclidean", "curvature": 0}, "mesh": {"h": 0.1}}"#;

#[test]
fn ball_command() {
    for (args, want) in [
        (["--n", "2", "--kappa", "0", "--radius", "2"], 0.5),
        (["--n", "2", "--kappa", "-1", "--radius", "1"], 1.0 / 1f64.sinh()),
        (["--n", "3", "--kappa", "0", "--radius", "1"], 1.0),
    ] {
        let out = run(&[&["ball"][..], &args[..]].concat());
        assert!(out.status.success());
        let v = last_json(&out);
        assert!((v["sigma1"].as_f64().unwrap() - want).abs() < 1e-6, "{v}");
        assert!(v["difference"].as_f64().unwrap().abs() < 1e-6);
    }
    assert_eq!(run(&["ball", "--n", "2", "--kappa", "1", "--radius", "1"]).status.code(), Some(2));
    assert_eq!(run(&["ball", "--n", "2", "--kappa", "0"]).status.code(), Some(2));
}

#[test]
fn bound_command() {
    let c = |args: &[&str]| last_json(&run(&[&["bound"][..], args].concat()))["C"].as_f64().unwrap();
    assert_eq!(c(&["--n", "2", "--kappa", "-1", "--K", "-1", "--d", "7"]), 1.0);
    assert!((c(&["--n", "2", "--kappa", "0", "--K", "-1", "--d", "1"]) - 1f64.sinh().powi(2)).abs() < 1e-11);
    assert!((c(&["--n", "4", "--kappa", "0", "--K", "-1", "--d", "1"]) - 1f64.sinh().powi(6)).abs() < 1e-11);
    assert_eq!(run(&["bound", "--n", "2", "--kappa", "-1", "--K", "0", "--d", "1"]).status.code(), Some(2));
}

#[test]
fn verify_writes_report_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path(), "disk.json", DISK);
    let out = dir.path().join("r.json");
    let status = run(&["verify", "--spec", spec.to_str().unwrap(), "--out", out.to_str().unwrap()]).status;
    assert_eq!(status.code(), Some(0));
    let report = VerificationReport::from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(report.pass && (report.ratio - 1.0).abs() < 1e-2);
    assert_eq!(report.refinements.len(), 3);

    let bad = write_spec(
        dir.path(),
        "bad.json",
        r#"{"geometry": {"type": "disk", "radius": -1},
        "ambient": {"model": "euclidean"}, "mesh": {"h": 0.1}}"#,
    );
    let code =
        run(&["verify", "--spec", bad.to_str().unwrap(), "--out", out.to_str().unwrap()]).status.code();
    assert_eq!(code, Some(2));
    let missing = dir.path().join("missing.json");
    let code =
        run(&["verify", "--spec", missing.to_str().unwrap(), "--out", out.to_str().unwrap()]).status.code();
    assert_eq!(code, Some(2));
    let unwritable = dir.path().join("no/such/dir/r.json");
    let code = run(&["verify", "--spec", spec.to_str().unwrap(), "--out", unwritable.to_str().unwrap()])
        .status
        .code();
    assert_eq!(code, Some(2));
}

#[test]
fn verify_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let spec = corpus_dir().join("mixed_hyp_ellipse.json");
    let outs: Vec<PathBuf> = (0..3).map(|i| dir.path().join(format!("r{i}.json"))).collect();
    for (i, out) in outs.iter().enumerate() {
        let mut args = vec!["verify", "--spec", spec.to_str().unwrap(), "--out", out.to_str().unwrap()];
        if i < 2 {
            args.push("--deterministic");
        }
        assert!(run(&args).status.success());
    }
    let bytes: Vec<Vec<u8>> = outs.iter().map(|p| std::fs::read(p).unwrap()).collect();
    assert_eq!(bytes[0], bytes[1]);
    // The parallel assembly path reproduces the same bytes.
    assert_eq!(bytes[0], bytes[2]);
}

#[test]
fn report_validates_and_round_trips() {
    let schema: serde_json::Value =
        serde_json::from_str(include_str!("../schema/report.schema.json")).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let spec = SpecFile::load(&corpus_dir().join("bw_hyp_star.json")).unwrap();
    let report = verify(&spec, "star", VerifyOptions { refinements: 1, parallel: false }).unwrap();
    let text = report.to_json().unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    let errors: Vec<String> = validator.iter_errors(&value).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}");
    assert_eq!(VerificationReport::from_json(&text).unwrap(), report);

    let keys: Vec<&str> = value.as_object().unwrap().keys().map(|k| k.as_str()).collect();
    assert_eq!(&keys[..3], ["schema_version", "name", "spec"]);
    assert_eq!(value["schema_version"], "1");
    // Twelve significant digits at most.
    let digits = value["sigma1_fem"].to_string().chars().filter(|c| c.is_ascii_digit()).count();
    assert!(digits <= 13, "{}", value["sigma1_fem"]);

    let spec_schema: serde_json::Value =
        serde_json::from_str(include_str!("../schema/spec.schema.json")).unwrap();
    let spec_validator = jsonschema::validator_for(&spec_schema).unwrap();
    for path in steklov::corpus::spec_paths(&corpus_dir()).unwrap() {
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert!(spec_validator.is_valid(&v), "{}", path.display());
    }
}

#[test]
fn richardson_error_estimate_covers_last_step() {
    let spec = SpecFile::load(&corpus_dir().join("bw_ellipse.json")).unwrap();
    let report = verify(&spec, "ellipse", VerifyOptions::default()).unwrap();
    let n = report.refinements.len();
    let step = (report.refinements[n - 1].sigma1 - report.refinements[n - 2].sigma1).abs();
    assert!(report.sigma1_error >= step / 3.0 * (1.0 - 1e-11));
    assert!(report.sigma1_fem < report.sigma1_star);
    assert!(report.slack >= 1e-3);
}

#[test]
fn corpus_command_isolates_failures() {
    let dir = tempfile::tempdir().unwrap();
    write_spec(dir.path(), "a_disk.json", DISK);
    write_spec(dir.path(), "b_broken.json", "{ not json");
    write_spec(
        dir.path(),
        "c_coarse_annulus.json",
        r#"{"geometry": {"type": "annulus", "r_in": 0.97, "r_out": 1},
        "ambient": {"model": "euclidean"}, "mesh": {"h": 0.1}}"#,
    );
    let csv_path = dir.path().join("out.csv");
    let out = run(&[
        "corpus",
        "--dir",
        dir.path().to_str().unwrap(),
        "--csv",
        csv_path.to_str().unwrap(),
        "--refinements",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let mut reader = csv::Reader::from_path(&csv_path).unwrap();
    assert_eq!(
        reader.headers().unwrap().iter().collect::<Vec<_>>(),
        ["name", "sigma1_fem", "sigma1_star", "C", "ratio", "q41", "q42", "q43", "pass", "error"]
    );
    let rows: Vec<CsvRow> = reader.deserialize().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0].pass, Some(true));
    assert!(rows[0].error.is_empty());
    assert_eq!(rows[1].pass, None);
    assert!(rows[1].error.contains("invalid spec"));
    assert!(rows[2].error.contains("resolution"));
}

#[test]
fn corpus_command_on_empty_directory() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("out.csv");
    let out = run(&["corpus", "--dir", dir.path().to_str().unwrap(), "--csv", csv_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn parallel_corpus_matches_serial() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["bw_kite.json", "bw_hyp_annulus.json", "mixed_hyp_star.json"] {
        std::fs::copy(corpus_dir().join(name), dir.path().join(name)).unwrap();
    }
    let options = VerifyOptions { refinements: 1, parallel: false };
    let serial = steklov::corpus::run_corpus(dir.path(), options, false).unwrap();
    let parallel = steklov::corpus::run_corpus(dir.path(), options, true).unwrap();
    for (a, b) in serial.iter().zip(&parallel) {
        assert_eq!(a.outcome.as_ref().unwrap(), b.outcome.as_ref().unwrap());
    }
}

#[test]
fn mesh_command_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("m.svg");
    let spec = corpus_dir().join("bw_lshape.json");
    let out = run(&["mesh", "--spec", spec.to_str().unwrap(), "--svg", svg.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") && text.trim_end().ends_with("</svg>"));
    assert!(text.contains("stroke=\"black\""));
}
