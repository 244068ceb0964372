use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn twistlaw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twistlaw")).args(args).env_remove("TWISTLAW_PRECISION").output().unwrap()
}

fn json_out(args: &[&str]) -> Value {
    let out = twistlaw(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn error_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).unwrap()
}

fn fixtures() -> String {
    format!("{}/../twistlaw/tests/data/fixtures.jsonl", env!("CARGO_MANIFEST_DIR"))
}

fn temp_file(name: &str, text: &str) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("twistlaw-cli-{}-{name}", std::process::id()));
    std::fs::File::create(&path).unwrap().write_all(text.as_bytes()).unwrap();
    path
}

#[test]
fn classify_examples() {
    let v = json_out(&["classify", "--curve", "[1,-1,0,-2,-1]", "--field", "[1,0,1]"]);
    assert_eq!(v["global"], "LawfulEvil");
    assert_eq!(v["root_number"], -1);
    let v = json_out(&["classify", "--curve", "[0,1,0,-12,-67/4]", "--field", "[37,0,0,0,1]"]);
    assert_eq!(v["global"], "LawfulGood");
    assert_eq!(v["evil_count"], 2);
    let v = json_out(&["classify", "--curve", "[1,-1,0,-2,-1]", "--field", "Q"]);
    assert_eq!(v["global"], "Chaotic");
    assert_eq!(v["hint"], "BecomesLawfulOverSomeQuadratic");
}

#[test]
fn place_filter_and_text() {
    let v = json_out(&["classify", "--curve", "[1,-1,0,-2,-1]", "--field", "[1,0,1]", "--place-filter", "7"]);
    let places = v["places"].as_array().unwrap();
    assert_eq!(places.len(), 1);
    assert_eq!(places[0]["evidence"]["branch"], "odd_iii");
    assert_eq!(places[0]["place"]["f"], 2);
    let out = twistlaw(&["--format", "text", "classify", "--curve", "[1,-1,0,-2,-1]", "--field", "[1,0,1]"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("global: LawfulEvil"), "{text}");
    assert!(text.contains("(-2|k) = +1"), "{text}");
}

#[test]
fn job_files() {
    let job = temp_file(
        "job.json",
        r#"{"curve": {"a_invariants": ["0", "5/4", "0", "-2", "-7"]}, "field": [11, 0, 0, 0, 0, 0, 1], "options": {"precision": 40}}"#,
    );
    let v = json_out(&["classify", "--job", job.to_str().unwrap()]);
    assert_eq!(v["global"], "LawfulEvil");
    let bad = temp_file("bad.json", r#"{"curve": {"a_invariants": [0, 0, 0, 0, 1]}, "field": "Q", "colour": "red"}"#);
    let out = twistlaw(&["classify", "--job", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_of(&out)["error"], "Validation");
}

#[test]
fn verdict_json_parses_back() {
    let v = json_out(&["classify", "--curve", "[0,1,0,-12,-67/4]", "--field", "[37,0,0,0,1]"]);
    let g: twistlaw::classify::GlobalVerdict = serde_json::from_value(v.clone()).unwrap();
    let again = serde_json::to_value(&g).unwrap();
    for key in ["global", "root_number", "places", "evil_count", "bad_primes"] {
        assert_eq!(again[key], v[key], "{key}");
    }
}

#[test]
fn local_examples() {
    let v = json_out(&["local", "--curve", "[0,1,1,-12,-17]", "--prime", "37"]);
    assert_eq!((v["kodaira"].as_str(), v["delta"].as_i64(), v["verdict"].as_str()), (Some("III"), Some(3), Some("LawfulEvil")));
    let v = json_out(&["local", "--curve", "[1,1,0,-2,-7]", "--prime", "11"]);
    assert_eq!((v["kodaira"].as_str(), v["delta"].as_i64(), v["verdict"].as_str()), (Some("IV"), Some(4), Some("Chaotic")));
    let v = json_out(&["local", "--curve", "[1,-1,0,-2,-1]", "--prime", "5"]);
    assert_eq!((v["kodaira"].as_str(), v["verdict"].as_str()), (Some("I0"), Some("LawfulGood")));
    // over Q_37(fourth root of -37) the curve has good reduction
    let v = json_out(&["local", "--curve", "[0,1,0,-12,-67/4]", "--prime", "37", "--ext", "[37,0,0,0,1]"]);
    assert_eq!(v["kodaira"], "I0");
    assert_eq!(v["local_field"]["e"], 4);
}

#[test]
fn corpus_reports() {
    let out = twistlaw(&["--format", "text", "corpus", &fixtures()]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(out.status.success(), "{text}");
    assert!(text.contains("140/140 kodaira match"), "{text}");
    assert!(text.contains("0 failed"), "{text}");

    let first = std::fs::read_to_string(fixtures()).unwrap().lines().next().unwrap().replace("\"delta\": 4", "\"delta\": 5");
    let corrupted = temp_file("corrupt.jsonl", &first);
    let out = twistlaw(&["--format", "text", "corpus", corrupted.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("121c1") && text.contains("want IV delta 5"), "{text}");

    let empty = temp_file("empty.jsonl", "");
    let out = twistlaw(&["corpus", empty.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_of(&out)["error"], "MalformedFixture");
}

#[test]
fn doubled_precision_reproduces_the_corpus() {
    let a = json_out(&["corpus", &fixtures()]);
    let b = json_out(&["--precision", "80", "corpus", &fixtures()]);
    assert_eq!(a, b);
}

#[test]
fn input_errors_exit_2() {
    for args in [
        vec!["classify", "--curve", "[0,0,0,0,1.5]"],
        vec!["classify", "--curve", "[0,0,0,0,0]"],
        vec!["classify", "--curve", "[0,0,0,1,1]", "--field", "[4,0,0,0,1]"],
        vec!["classify", "--curve", "[0,0,0,1,1]", "--field", "[1,0,0,0,0,0,0,0,0,1]"],
        vec!["local", "--curve", "[0,0,0,0,1]", "--prime", "9"],
        vec!["local", "--curve", "[0,0,0,0,1]", "--prime", "5", "--ext", "[-1,0,1]"],
    ] {
        let out = twistlaw(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let e = error_of(&out);
        assert!(e["error"].is_string() && e["message"].is_string(), "{e}");
    }
}

#[test]
fn factor_and_invariants() {
    let v = json_out(&["factor", "--prime", "5", "--poly", "[1,0,1]"]);
    assert_eq!(v["factors"].as_array().unwrap().len(), 2);
    let v = json_out(&["factor", "--prime", "2", "--poly", "[-2,0,0,0,0,0,0,0,1]"]);
    assert_eq!(v["factors"][0]["degree"], 8);
    let v = json_out(&["invariants", "--curve", "[1,1,0,-2,-7]"]);
    assert_eq!(v["discriminant"], "-14641");
    let v = json_out(&["invariants", "--curve", "[0,1,1,-12,-17]"]);
    assert_eq!(v["discriminant"], "50653");
    let v = json_out(&["invariants", "--curve", r#"[0,0,0,[["1",1]],0]"#, "--field", "[1,0,1]"]);
    assert_eq!(v["c4"], serde_json::json!([["-48", 1]]));
}
