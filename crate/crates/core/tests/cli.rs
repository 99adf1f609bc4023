use std::path::Path;
use std::process::Command;

use qmap_core::cli::{exit_code, run_args, Outcome};
use qmap_core::Error;
use serde_json::Value;

fn qmap(args: &[&str]) -> Outcome {
    run_args(std::iter::once("qmap").chain(args.iter().copied()))
}

fn json(o: &Outcome) -> Value {
    assert_eq!(o.code, 0, "stderr: {}", o.stderr);
    serde_json::from_str(&o.stdout).unwrap()
}

fn write_spec(dir: &Path, file: &str, edit: impl FnOnce(&mut Value)) -> String {
    let text = qmap_core::assets::bundled("p2").unwrap();
    let mut doc: Value = serde_json::from_str(text).unwrap();
    edit(&mut doc);
    let path = dir.join(file);
    std::fs::write(&path, serde_json::to_string_pretty(&doc).unwrap()).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn small_i_document() {
    let doc = json(&qmap(&["ifun", "--small", "-D", "2"]));
    let d1 = &doc["series"]["terms"]["[1]"]["[0,0,0]"];
    assert_eq!(d1["-3"][0], "1");
    assert_eq!(d1["-4"][1], "-3");
    assert_eq!(d1["-5"][2], "6");
    assert_eq!(doc["kind"], "small");
}

#[test]
fn big_i_at_degree_zero() {
    let doc = json(&qmap(&["ifun", "--big", "-D", "0", "-T", "1"]));
    let terms = doc["series"]["terms"]["[0]"].as_object().unwrap();
    assert_eq!(terms.len(), 4);
    assert_eq!(terms["[0,0,0]"]["0"][0], "1");
    assert_eq!(terms["[0,1,0]"]["-1"], serde_json::json!(["0", "1", "0"]));
    assert_eq!(terms["[0,0,1]"]["-1"], serde_json::json!(["0", "0", "1"]));
}

#[test]
fn validation_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let weighted = write_spec(dir.path(), "p112.json", |d| {
        d["charges"] = serde_json::json!([[1], [1], [2]]);
        d["divisor_classes"] = serde_json::json!(["H", "H", "2*H"]);
    });
    let o = qmap(&["validate", "--target", &weighted]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("condition-star-violated"), "{}", o.stderr);

    let negative = write_spec(dir.path(), "neg.json", |d| d["theta"] = serde_json::json!(["-1"]));
    let o = qmap(&["validate", "--target", &negative]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("empty-quotient"), "{}", o.stderr);

    let doc = json(&qmap(&["validate", "--target", "p4_quintic"]));
    assert_eq!(doc["status"], "ok");
    assert_eq!(doc["convexity"]["summands"], 1);
    assert_eq!(qmap(&["validate", "--target", "nowhere"]).code, 2);
}

#[test]
fn error_codes() {
    assert_eq!(exit_code(&Error::InternalInconsistency("x".into())), 3);
    assert_eq!(exit_code(&Error::InsufficientTruncation("x".into())), 4);
    assert_eq!(exit_code(&Error::EmptyQuotient { theta: "x".into() }), 2);
    assert_eq!(exit_code(&Error::Io("x".into())), 1);
}

#[test]
fn invariants() {
    let doc = json(&qmap(&["invariants", "--beta", "2", "--insert", "H^2,H^2,H^2,H^2", "--last", "H^2"]));
    assert_eq!(doc["value"], "1");
    assert!(doc.get("warning").is_none());

    let doc = json(&qmap(&["invariants", "--beta", "1", "--insert", "H", "--last", "H^2"]));
    assert_eq!(doc["value"], "0");
    assert!(doc["warning"].as_str().unwrap().contains("virtual dimension"));

    let o = qmap(&["invariants", "--beta", "2", "--insert", "2,2,2,2", "--last", "H^2", "-D", "1"]);
    assert_eq!(o.code, 4, "{}", o.stderr);
    assert!(o.stderr.contains("insufficient-truncation"));

    let o = qmap(&["invariants", "--beta", "1", "--insert", "Q", "--last", "H^2"]);
    assert_eq!(o.code, 2);

    let o = qmap(&["invariants", "--target", "p4_quintic", "--beta", "1", "--last", "H", "--format", "text"]);
    assert_eq!(o.stdout, "2875\n");
}

#[test]
fn mirror_document() {
    let doc = json(&qmap(&["mirror", "-D", "1", "-T", "2"]));
    assert_eq!(doc["coordinates"], "flat");
    assert_eq!(doc["basis"], serde_json::json!(["1", "H", "H^2"]));
    let raw = json(&qmap(&["mirror", "--target", "p4_quintic", "-D", "1", "-T", "1", "--coordinates", "mirror"]));
    assert_eq!(raw["tau"]["terms"]["[1]"]["[0,0,0,0,0]"][1], "770");
    let o = qmap(&["mirror", "-D", "1", "-T", "0"]);
    assert_eq!(o.code, 4, "{}", o.stderr);
}

#[test]
fn text_output() {
    let o = qmap(&["ifun", "--small", "-D", "1", "--format", "text"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("q^[1] t^[0,0,0]: z^-3 - 3*H z^-4 + 6*H^2 z^-5"), "{}", o.stdout);
    let o = qmap(&["verify", "--suite", "quintic", "--format", "text"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.starts_with("PASS quintic.lines engine=2875 oracle=2875\n"));
}

#[test]
fn usage_errors() {
    assert_eq!(qmap(&["ifun"]).code, 2);
    assert_eq!(qmap(&["ifun", "--small", "--big"]).code, 2);
    let help = qmap(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("verify"));
}

#[test]
fn cache_is_keyed_on_content() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let cache_s = cache.to_string_lossy().into_owned();
    let files = || std::fs::read_dir(&cache).map_or(0, |d| d.count());

    let a = qmap(&["--cache", &cache_s, "ifun", "--big", "-D", "1", "-T", "2"]);
    assert_eq!(files(), 1);
    let b = qmap(&["--cache", &cache_s, "ifun", "--big", "-D", "1", "-T", "2"]);
    assert_eq!(a, b);
    assert_eq!(files(), 1);

    qmap(&["--cache", &cache_s, "ifun", "--big", "-D", "1", "-T", "1"]);
    assert_eq!(files(), 2);

    let spec = write_spec(dir.path(), "p2.json", |_| {});
    let c = qmap(&["--cache", &cache_s, "ifun", "--big", "-D", "1", "-T", "2", "--target", &spec]);
    assert_eq!(c, a);
    assert_eq!(files(), 2, "same content, same key");
    let spec = write_spec(dir.path(), "p2.json", |d| d["name"] = "plane".into());
    let d = qmap(&["--cache", &cache_s, "ifun", "--big", "-D", "1", "-T", "2", "--target", &spec]);
    assert_eq!(files(), 3);
    assert_ne!(d.stdout, a.stdout);
}

#[test]
fn binary_uses_cache_env() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_qmap"))
            .args(["mirror", "-D", "2", "-T", "2"])
            .env("QMAP_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);

    let bad = Command::new(env!("CARGO_BIN_EXE_qmap"))
        .args(["validate", "--target", "/nonexistent/t.json"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
