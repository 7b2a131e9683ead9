use serde_json::Value;

use pdlab_web::{lz_json, machines_json, repeat_curves_json, run_json, zone_curves_json};

fn parse(s: Result<String, String>) -> Value {
    serde_json::from_str(&s.unwrap()).unwrap()
}

#[test]
fn lists_builtins() {
    let v = parse(machines_json());
    let names: Vec<&str> = v.as_array().unwrap().iter().map(|m| m["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"walker") && names.contains(&"unary-squeezer-2"));
}

#[test]
fn run_trace_of_walker() {
    let v = parse(run_json("walker", "0010"));
    let heights: Vec<u64> = v["steps"].as_array().unwrap().iter().map(|s| s["height"].as_u64().unwrap()).collect();
    assert_eq!(heights, vec![1, 2, 3, 2, 3]);
    assert_eq!(v["output"], "0010");
    assert_eq!(v["stack"], "ZAA");
}

#[test]
fn run_squeezer_shows_endmarker_step() {
    let v = parse(run_json("unary-squeezer-2", "000000000"));
    assert_eq!(v["output"], "0100");
    let steps = v["steps"].as_array().unwrap();
    assert_eq!(steps.last().unwrap()["symbol"], "$");
    assert_eq!(steps.len(), 11);
}

#[test]
fn run_accepts_machine_text_and_reports_errors() {
    let text = "pdc id\nalphabet ab\nstack Z\nstart q Z\nmode plain\nstates q\nrule q a Z -> q Z out a\nrule q b Z -> q Z out b\n";
    assert_eq!(parse(run_json(text, "abba"))["output"], "abba");
    assert!(run_json("walker", "012").is_err());
    assert!(run_json("no such machine", "0").is_err());
}

#[test]
fn zone_curves_have_both_series() {
    let v = parse(zone_curves_json(2, 1, 2, 6));
    let curves = v["curves"].as_array().unwrap();
    assert_eq!(curves.len(), 2);
    assert_eq!(curves[1]["name"], "lz78");
    let last = curves[0]["points"].as_array().unwrap().last().unwrap()[0].as_u64().unwrap();
    assert_eq!(last, v["length"].as_u64().unwrap());
    assert!(zone_curves_json(1, 1, 2, 6).is_err());
}

#[test]
fn repeat_curves_resample_single_block() {
    let v = parse(repeat_curves_json("identity", "1", "01", 500));
    let pts = v["curves"][0]["points"].as_array().unwrap();
    assert!(pts.len() >= 32);
    assert!(pts.iter().all(|p| p[1].as_f64().unwrap() == 1.0));
}

#[test]
fn lz_phrase_view() {
    let v = parse(lz_json("0000", "01"));
    let texts: Vec<&str> = v["phrases"].as_array().unwrap().iter().map(|p| p["text"].as_str().unwrap()).collect();
    assert_eq!(texts, vec!["0", "00", "0"]);
    assert_eq!(v["code"], "010011");
    assert_eq!(v["phrases"][2]["literal"], Value::Null);
}
