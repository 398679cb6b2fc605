use lericone_web::{annotate_value, godel_value, prove_value};

#[test]
fn annotate_reports_every_node() {
    let v = annotate_value("~p1 -> (p1 -> p2)").unwrap();
    let seqs: Vec<&str> = v["nodes"].as_array().unwrap().iter().map(|n| n["seq"].as_str().unwrap()).collect();
    assert_eq!(seqs, ["", "c", "nc", "c", "lc", "rc"]);
    assert!(annotate_value("p1 ->").is_err());
}

#[test]
fn prove_returns_countermodels() {
    let v = prove_value("p1 -> ~~p1", "plain").unwrap();
    assert_eq!(v["status"], "invalid");
    assert_eq!(v["falsifies"], true);
    assert_eq!(v["true_at"], serde_json::json!(["(c, p1)"]));
    let v = prove_value("p1 -> ~~p1", "faithful").unwrap();
    assert_eq!(v["status"], "valid");
    assert!(prove_value("p1", "sideways").is_err());
}

#[test]
fn godel_example() {
    assert_eq!(godel_value("~p1 -> (p1 -> p1)").unwrap()["output"], "~p20250 -> (p750 -> p2250)");
}

#[test]
fn exports_wrap_errors() {
    let v: serde_json::Value = serde_json::from_str(&lericone_web::godel("p1 &")).unwrap();
    assert!(v["error"].is_string());
}
