use std::path::PathBuf;

use blockcond::cli::{run, EXIT_ENGINE, EXIT_FIXTURE, EXIT_OK, EXIT_USAGE, EXIT_VALIDATION};
use blockcond::fixtures::bundled;

fn call(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("blockcond").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn temp_file(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("blockcond-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn help_and_usage() {
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, EXIT_OK);
    for sub in ["analyze", "decompose", "levels", "check", "fixtures"] {
        assert!(out.contains(sub), "{out}");
    }
    assert_eq!(call(&[]).0, EXIT_USAGE);
    assert_eq!(call(&["analyze"]).0, EXIT_USAGE);
    assert_eq!(call(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(call(&["analyze", "--fixture", "nope"]).0, EXIT_USAGE);
    assert_eq!(call(&["analyze", "/nonexistent/x.json"]).0, EXIT_USAGE);
}

#[test]
fn analyze_text_and_json() {
    let (code, out, _) = call(&["analyze", "--fixture", "ex42"]);
    assert_eq!(code, EXIT_OK);
    assert!(
        out.contains("N_L(B) = 2, f_L = 21, case Squarefree, residual 1"),
        "{out}"
    );

    let (code, out, _) = call(&["analyze", "--fixture", "ex42", "--json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["integral"], true);
    assert_eq!(v["generator"], 2);
    assert_eq!(v["field_conductor"], 21);
    assert_eq!(v["case"], "Squarefree");
}

#[test]
fn non_integral_and_indeterminate() {
    let (code, out, _) = call(&["analyze", "--fixture", "ex98b"]);
    assert_eq!(code, EXIT_OK);
    assert!(
        out.contains("non-integral; ideal = 𝔭₂·𝔭₇² with f(𝔭₂)=3"),
        "{out}"
    );

    let mut v: serde_json::Value = serde_json::from_str(bundled("ex98a").unwrap()).unwrap();
    v["level_overrides"] = serde_json::json!([]);
    let path = temp_file("ex98-bare.json", &v.to_string());
    let (code, out, err) = call(&["analyze", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_ENGINE, "{out}{err}");
    assert!(err.contains("level_overrides"), "{err}");
    assert!(out.contains("indeterminate"), "{out}");
}

#[test]
fn validation_errors_exit_2_with_pointer() {
    let bad = bundled("ex42").unwrap().replacen(
        "\"galois_exp\": 1",
        "\"galois_exp\": 1, \"extra\": 0",
        1,
    );
    let path = temp_file("bad-key.json", &bad);
    let (code, _, err) = call(&["levels", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_VALIDATION);
    assert!(err.contains("/inner_twists/0/extra"), "{err}");

    let bad = bundled("ex42")
        .unwrap()
        .replace("\"deg_F\": 1", "\"deg_F\": 3");
    let path = temp_file("bad-degree.json", &bad);
    assert_eq!(
        call(&["analyze", path.to_str().unwrap()]).0,
        EXIT_VALIDATION
    );
}

#[test]
fn decompose_levels_check() {
    let (code, out, _) = call(&["decompose", "--fixture", "ex98a"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("A_f (dim 2) × A_{f⊗ε} (dim 1)"), "{out}");

    let (code, out, _) = call(&["levels", "--fixture", "ex64", "--json"]);
    assert_eq!(code, EXIT_OK);
    serde_json::from_str::<serde_json::Value>(&out).unwrap();

    let (code, out, _) = call(&["check", "--fixture", "gamma0-512"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("closed form holds"), "{out}");
}

#[test]
fn output_is_deterministic() {
    for sub in ["analyze", "decompose", "levels", "check"] {
        for name in ["ex42", "ex64", "ex81", "genus2"] {
            for json in [false, true] {
                let mut args = vec![sub, "--fixture", name];
                if json {
                    args.push("--json");
                }
                assert_eq!(call(&args), call(&args), "{args:?}");
            }
        }
    }
}

#[test]
fn fixtures_subcommand() {
    let (code, out, _) = call(&["fixtures", "--list"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().count(), 7);

    let (code, out, _) = call(&["fixtures", "--json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["passed"], 7);

    let corrupt = bundled("ex81")
        .unwrap()
        .replace("\"generator\": \"3\"", "\"generator\": \"9\"");
    assert_ne!(corrupt, bundled("ex81").unwrap());
    let path = temp_file("ex81-corrupt.json", &corrupt);
    let (code, out, _) = call(&["fixtures", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_FIXTURE);
    assert!(
        out.contains("ex81-corrupt") && out.contains("generator"),
        "{out}"
    );
}
