use std::path::{Path, PathBuf};
use std::process::Command;

use acbm::cli::{EXIT_OK, EXIT_PRECONDITION, EXIT_USAGE};
use acbm::io::{parse_group, parse_input, Input};
use acbm::structure::canonical_structure;
use acbm::validate_group_element;

fn acbm(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_acbm"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn gen_to(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let p = dir.join(name);
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", p.to_str().unwrap()]);
    let (code, _, err) = acbm(&full);
    assert_eq!(code, EXIT_OK, "{err}");
    p
}

#[test]
fn lie_group_file_classifies_as_f9_f10() {
    let dir = tempfile::tempdir().unwrap();
    let p = gen_to(
        dir.path(),
        "lie.json",
        &["liegroup", "--n", "1", "--a", "1.0,1.0"],
    );
    let (code, out, _) = acbm(&["classify", "--input", p.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("class: F9 + F10"), "{out}");
    assert!(out.contains("present: [F9, F10]"));
}

#[test]
fn sphere_at_zero_is_f4() {
    let dir = tempfile::tempdir().unwrap();
    let p = gen_to(
        dir.path(),
        "sphere.json",
        &["sphere", "--n", "1", "--t", "0"],
    );
    let (code, out, _) = acbm(&[
        "classify",
        "--input",
        p.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["present"], serde_json::json!([4]));
    assert_eq!(v["classes"], serde_json::json!(["F4"]));
    assert_eq!(v["is_F0"], serde_json::json!(false));
}

#[test]
fn zero_tensor_is_f0() {
    let dir = tempfile::tempdir().unwrap();
    let comps = vec!["0"; 27].join(",");
    let p = write(
        dir.path(),
        "zero.json",
        &format!(r#"{{"dim": 3, "comps": [{comps}]}}"#),
    );
    let (code, out, _) = acbm(&["classify", "--input", p.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("F0: true"));
}

#[test]
fn malformed_file_names_missing_field() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "bad.json", r#"{"comps": [1, 2, 3]}"#);
    let (code, _, err) = acbm(&["classify", "--input", p.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("dim"), "{err}");

    let p = write(dir.path(), "garbage.json", "{ not json");
    assert_eq!(
        acbm(&["classify", "--input", p.to_str().unwrap()]).0,
        EXIT_USAGE
    );
    assert_eq!(
        acbm(&["classify", "--input", "/nonexistent/file.json"]).0,
        EXIT_USAGE
    );
}

#[test]
fn tensor_outside_f_is_a_precondition_failure() {
    let dir = tempfile::tempdir().unwrap();
    let mut comps = vec!["0"; 27];
    comps[1] = "1"; // F(ξ, ξ, e₁) without its symmetric partner
    let p = write(
        dir.path(),
        "notf.json",
        &format!(r#"{{"dim": 3, "comps": [{}]}}"#, comps.join(",")),
    );
    let (code, _, err) = acbm(&["classify", "--input", p.to_str().unwrap()]);
    assert_eq!(code, EXIT_PRECONDITION);
    assert!(err.contains("F(x,y,z) = F(x,z,y)"), "{err}");
}

#[test]
fn invalid_structure_names_the_axiom() {
    let dir = tempfile::tempdir().unwrap();
    let comps = vec!["0"; 27].join(",");
    let text =
        format!(r#"{{"dim": 3, "comps": [{comps}], "structure": {{"n": 1, "eta": [1, 0.5, 0]}}}}"#);
    let p = write(dir.path(), "badstruct.json", &text);
    let (code, _, err) = acbm(&["classify", "--input", p.to_str().unwrap()]);
    assert_eq!(code, EXIT_PRECONDITION);
    assert!(err.contains("eta o phi = 0"), "{err}");
}

#[test]
fn jacobi_violation_is_a_precondition_failure() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{"n": 1, "brackets": [
        {"i": 1, "j": 2, "coeffs": [0, 1, 0]},
        {"i": 0, "j": 1, "coeffs": [0, 0, 1]}]}"#;
    let p = write(dir.path(), "nonlie.json", text);
    let (code, _, err) = acbm(&["classify", "--input", p.to_str().unwrap()]);
    assert_eq!(code, EXIT_PRECONDITION);
    assert!(err.contains("Jacobi"), "{err}");
}

#[test]
fn random_round_trip_classifies() {
    let dir = tempfile::tempdir().unwrap();
    for extra in [&[][..], &["--random-basis"][..]] {
        let mut args = vec!["random", "--dim", "5", "--seed", "7"];
        args.extend_from_slice(extra);
        let p = gen_to(dir.path(), "random.json", &args);
        assert_eq!(
            acbm(&["classify", "--input", p.to_str().unwrap()]).0,
            EXIT_OK
        );
    }
}

#[test]
fn generated_group_element_is_valid() {
    let (code, out, _) = acbm(&["gen", "group", "--n", "2", "--seed", "1"]);
    assert_eq!(code, EXIT_OK);
    let a = parse_group(&out).unwrap();
    assert!(validate_group_element(&canonical_structure(2).unwrap(), &a, 1e-9).unwrap());
}

#[test]
fn gen_output_round_trips_exactly() {
    let (_, out, _) = acbm(&[
        "gen",
        "random",
        "--dim",
        "7",
        "--seed",
        "3",
        "--random-basis",
    ]);
    let (s, f) = match parse_input(&out).unwrap() {
        Input::Tensor(s, f) => (s, f),
        _ => panic!("expected a tensor"),
    };
    let s0 = acbm::structure::random_structure(3, 3).unwrap();
    assert_eq!(s, s0);
    assert_eq!(f, acbm::random_f(&s0, 3));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let p = gen_to(
        dir.path(),
        "r.json",
        &["random", "--dim", "5", "--seed", "11", "--random-basis"],
    );
    let run = || {
        acbm(&[
            "classify",
            "--input",
            p.to_str().unwrap(),
            "--format",
            "json",
        ])
        .1
    };
    assert_eq!(run(), run());
    assert_eq!(
        acbm(&["verify", "--suite", "dim3", "--seeds", "5", "--format", "json"]).1,
        acbm(&["verify", "--suite", "dim3", "--seeds", "5", "--format", "json"]).1
    );
}

#[test]
fn project_writes_a_component() {
    let dir = tempfile::tempdir().unwrap();
    let p = gen_to(dir.path(), "s.json", &["sphere", "--n", "1", "--t", "0.4"]);
    let out = dir.path().join("f4.json");
    let (code, _, err) = acbm(&[
        "project",
        "--input",
        p.to_str().unwrap(),
        "--component",
        "4",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    let (code, text, _) = acbm(&["classify", "--input", out.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(text.contains("present: [F4]"), "{text}");

    let (code, text, _) = acbm(&["project", "--input", p.to_str().unwrap(), "--w", "1"]);
    assert_eq!(code, EXIT_OK);
    assert!(text.contains("\"comps\""));
}

#[test]
fn verify_suites() {
    let (code, out, _) = acbm(&["verify", "--suite", "dim3", "--seeds", "100"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("PASS  components 2,3,6,7 vanish"), "{out}");

    let (code, out, _) = acbm(&["verify", "--suite", "decomposition", "--seeds", "50"]);
    assert_eq!(code, EXIT_OK);
    for name in ["reconstruction", "orthogonality", "idempotency"] {
        assert!(out.contains(&format!("PASS  {name}")), "{out}");
    }

    let (code, out, _) = acbm(&["verify", "--suite", "group", "--seeds", "50"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("PASS  p_i equivariance"));

    assert_eq!(acbm(&["verify", "--suite", "nope"]).0, EXIT_USAGE);
}
