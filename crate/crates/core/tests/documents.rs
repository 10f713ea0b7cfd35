use qtoda::{build_presentation, solve_series, Coords, Family, RootSystem};
use serde_json::json;

#[test]
fn presentation_document_shape() {
    let rs = RootSystem::new(Family::A, 1).unwrap();
    let doc = build_presentation(&rs, Coords::P).unwrap().to_doc();
    assert_eq!(
        serde_json::to_value(&doc).unwrap(),
        json!({
            "family": "A",
            "rank": 1,
            "variables": [{"name": "p1", "weight": 1}, {"name": "q1", "weight": 2}],
            "relations": ["-p1^2 + q1"],
            "weyl_order": 2,
            "poincare": "t + 1",
        })
    );
    let text = serde_json::to_string(&doc).unwrap();
    let keys = ["family", "rank", "variables", "relations", "weyl_order", "poincare"];
    let pos: Vec<usize> = keys.iter().map(|k| text.find(&format!("\"{k}\"")).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]), "{text}");
}

#[test]
fn coords_serialize_like_display() {
    for c in [Coords::Native, Coords::P] {
        assert_eq!(serde_json::to_string(&c).unwrap(), format!("\"{c}\""));
        assert_eq!(c.to_string().parse::<Coords>().unwrap(), c);
    }
}

#[test]
fn series_document_lists_sectors_in_order() {
    let rs = RootSystem::new(Family::A, 1).unwrap();
    let doc = solve_series(&rs, 2).unwrap().to_doc();
    let v = serde_json::to_value(&doc).unwrap();
    assert_eq!(v["cutoff"], 2);
    assert_eq!(v["sectors"][1], json!({"d": [1], "value": "h^-2 - 2*p1*h^-3"}));
    assert_eq!(v["sectors"].as_array().unwrap().len(), 3);
}
