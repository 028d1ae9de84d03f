use diagmon_web::{analyze_json, diagrams_json, nonss_json, product_json};
use serde_json::Value;

fn parse(s: Result<String, String>) -> Value {
    serde_json::from_str(&s.expect("ok")).expect("json")
}

#[test]
fn analyze_tl4() {
    let v = parse(analyze_json("tl", 4, "classical"));
    assert_eq!(v["simple_dims"], serde_json::json!({"0": 1, "2": 3, "4": 1}));
    assert!(analyze_json("pa", 5, "classical").is_err());
    assert!(analyze_json("tl", 3, "bogus").is_err());
}

#[test]
fn products_on_the_page() {
    let ds = parse(diagrams_json("tl", 2));
    assert_eq!(ds.as_array().unwrap().len(), 2);
    let cup = ds.as_array().unwrap().iter().position(|d| d.as_str().unwrap().contains("B1,B2")).unwrap();
    let v = parse(product_json("tl", 2, cup, cup, "classical"));
    assert_eq!(v["floats"], serde_json::json!([{"genus": 1, "count": 1}]));
    assert_eq!(v["evaluated"], v["diagram"]);
    let v = parse(product_json("tl", 2, cup, cup, "zero"));
    assert_eq!(v["evaluated"], "0");
}

#[test]
fn nonss_rows() {
    let v = parse(nonss_json("tl", 4, 2));
    assert_eq!(v, serde_json::json!([{"k": 2, "b": "2"}, {"k": 4, "b": "1"}]));
}
