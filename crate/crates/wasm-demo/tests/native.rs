use biharmonic_wasm::{enumerate_json, means_json, orbit_json, MAX_LIMIT};
use serde_json::Value;

fn parse(s: String) -> Value {
    serde_json::from_str(&s).unwrap()
}

#[test]
fn means_includes_divisors() {
    let v = parse(means_json(35).unwrap());
    assert_eq!(v["B"], "15");
    assert_eq!(v["divisors"], serde_json::json!([1, 5, 7, 35]));
    assert!(means_json(0).is_err());
}

#[test]
fn enumerate_kinds() {
    let v = parse(enumerate_json("biharmonic", 37).unwrap());
    assert_eq!(v["terms"].as_array().unwrap().len(), 13);
    assert!(enumerate_json("perfect", 10).is_err());
    assert!(enumerate_json("harmonic", MAX_LIMIT + 1).is_err());
}

#[test]
fn orbit_pairs_and_crystals() {
    let v = parse(orbit_json(4, 5, 200).unwrap());
    assert_eq!(v["pairs"][0], serde_json::json!(["1", "0"]));
    assert_eq!(v["pairs"][1], serde_json::json!(["4", "1"]));
    assert_eq!(v["crystals"][0]["N"], "119");
    assert_eq!(v["crystals"][0]["B"], "52");
    assert!(orbit_json(0, 5, 10).is_err());
}
