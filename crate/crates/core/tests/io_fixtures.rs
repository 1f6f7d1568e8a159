use contextuality::io::{analyze, parse_input, serialize_report, Format, Report};
use contextuality::{Observables, Rational};

fn fixture(name: &str) -> String {
    std::fs::read_to_string(format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn q(s: &str) -> Rational {
    s.parse().unwrap()
}

#[test]
fn aerts_fixture_parses_to_printed_values() {
    let doc = parse_input(&fixture("aerts.json")).unwrap();
    let Observables::Bell(o) = doc.observables().unwrap() else { panic!() };
    assert_eq!(*o.ab(0, 0), q("-0.778"));
    assert_eq!(*o.ab(1, 0), q("0.655"));
    assert_eq!(doc.labels.unwrap()["a1"][0], "Horse");
}

#[test]
fn aerts_report_text() {
    let doc = parse_input(&fixture("aerts.json")).unwrap();
    let r = analyze(&doc.observables().unwrap());
    let text = serialize_report(&r, Format::Text, 3);
    assert!(text.contains("contextuality degree: 0\n"), "{text}");
    assert!(text.contains("Delta_CHSH: 0.211\n"), "{text}");
    assert!(text.contains("summary: degree = 0, Delta0 = 1.890\n"), "{text}");
    assert_eq!(text, serialize_report(&r, Format::Text, 3));
}

#[test]
fn aerts_counts_sensitivity() {
    let doc = parse_input(&fixture("aerts_counts.json")).unwrap();
    let Report::Bell(r) = analyze(&doc.observables().unwrap()) else { panic!() };
    assert_eq!(r.delta0, q("153/81"));
    assert_eq!(r.delta_chsh, q("17/81"));
    assert!(r.degree.is_zero());
}

#[test]
fn counts_and_equal_tables_agree() {
    let counts = fixture("aerts_counts.json");
    let doc = parse_input(&counts).unwrap();
    let tables = doc
        .contexts
        .iter()
        .map(|c| {
            let t = contextuality::ContextTable::from_expectations(
                &c.expectations[0],
                &c.expectations[1],
                &c.expectations[2],
            )
            .unwrap();
            let [pp, pm, mp, mm] = t.cells().map(|x| format!("\"{x}\""));
            format!(r#""{}": {{"table": {{"pp": {pp}, "pm": {pm}, "mp": {mp}, "mm": {mm}}}}}"#, c.key)
        })
        .collect::<Vec<_>>()
        .join(", ");
    let table_doc = parse_input(&format!(r#"{{"kind": "bell", "contexts": {{{tables}}}}}"#)).unwrap();
    let a = analyze(&doc.observables().unwrap());
    let b = analyze(&table_doc.observables().unwrap());
    assert_eq!(a, b);
    for f in [Format::Json, Format::Text] {
        assert_eq!(serialize_report(&a, f, 6), serialize_report(&b, f, 6));
    }
}

#[test]
fn tsirelson_fixture_json() {
    let doc = parse_input(&fixture("tsirelson.json")).unwrap();
    let json = serialize_report(&analyze(&doc.observables().unwrap()), Format::Json, 6);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["delta_min"]["decimal"], "0.414214");
    assert_eq!(v["kind"], "bell");
}
