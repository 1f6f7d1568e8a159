use contextuality::polytope::{
    derive_delta_system_from, enumerate_vertices, facet_enumeration, SystemDescriptor,
};
use contextuality::{LinearSystem, SystemKind};

fn golden(name: &str) -> String {
    std::fs::read_to_string(format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn check(kind: SystemKind, stem: &str) {
    let d = SystemDescriptor::new(kind);
    let facets = facet_enumeration(&enumerate_vertices(&d)).unwrap();
    assert_eq!(facets.to_text(), golden(&format!("{stem}.facets")));
    let delta = derive_delta_system_from(&facets, &d).unwrap();
    assert_eq!(delta.to_text(), golden(&format!("{stem}.delta")));
}

#[test]
fn bell_matches_golden() {
    check(SystemKind::Bell, "bell");
}

#[test]
fn lg_matches_golden() {
    check(SystemKind::Lg, "lg");
}

#[test]
fn golden_files_round_trip() {
    for name in ["bell.facets", "lg.facets", "bell.delta", "lg.delta"] {
        let text = golden(name);
        assert_eq!(LinearSystem::parse_text(&text, None).unwrap().to_text(), text, "{name}");
    }
}
