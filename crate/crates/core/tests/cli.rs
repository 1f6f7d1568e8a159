use contextuality::cli::run;
use contextuality::LinearSystem;

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run_args(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(std::iter::once("contextuality").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn analyze_aerts() {
    let input = fixture("aerts.json");
    let (code, out, _) = run_args(&["analyze", "--input", &input]);
    assert_eq!(code, 0);
    assert!(out.contains("contextuality degree: 0\n"), "{out}");
    assert!(out.contains("Delta_CHSH: 0.210"), "{out}");
    assert_eq!(run_args(&["analyze", "--input", &input]).1, out);

    let (code, json, _) = run_args(&["analyze", "--input", &input, "--format", "json", "--precision", "3"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["delta0"]["decimal"], "1.890");
}

#[test]
fn analyze_lg() {
    let (code, out, _) = run_args(&["analyze", "--input", &fixture("lg_frustrated.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("Delta_SZ: 1\n"), "{out}");
    assert!(out.contains("violated"), "{out}");
}

#[test]
fn invalid_input_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{"kind": "bell", "contexts": {"a1b1": {"counts": {"pp": 1, "pm": 1, "mp": 1, "mm": 1}}}}"#,
    )
    .unwrap();
    let (code, _, err) = run_args(&["analyze", "--input", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(err, "error: contexts.a1b2: missing context\n");
}

#[test]
fn derive_writes_systems() {
    let dir = tempfile::tempdir().unwrap();
    let facets = dir.path().join("lg.facets");
    let (code, out, _) = run_args(&["derive", "--system", "lg", "--what", "facets", "-o", facets.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out, "56 facets (32 compatibility + 24 implicit)\n");
    let sys = LinearSystem::parse_text(&std::fs::read_to_string(&facets).unwrap(), None).unwrap();
    assert_eq!(sys.inequalities().len(), 56);

    let bell = dir.path().join("bell.facets");
    let (code, out, _) = run_args(&["derive", "--system", "bell", "--what", "facets", "--output", bell.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out, "160 facets (128 compatibility + 32 implicit)\n");

    let delta = dir.path().join("lg.delta");
    let (code, out, _) = run_args(&["derive", "--system", "lg", "--what", "delta-system", "-o", delta.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.starts_with("36 inequalities"), "{out}");
}

#[test]
fn verify_and_oracle() {
    let (code, out, _) = run_args(&["verify", "--system", "lg", "--n", "1000", "--seed", "7"]);
    assert_eq!(code, 0);
    assert_eq!(out, "1000/1000 instances: closed form = LP oracle\n");

    let (code, out, _) = run_args(&["oracle", "--input", &fixture("tsirelson.json")]);
    assert_eq!(code, 0);
    assert!(out.contains("LP Delta_min: 0.414214"), "{out}");
    assert!(out.ends_with("agree\n"), "{out}");
}
