use std::path::Path;

use taseval::cli::{run, EXIT_DATA, EXIT_IO, EXIT_OK, EXIT_USAGE};

fn call(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("taseval").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn usage_errors() {
    assert_eq!(call(&[]).0, EXIT_USAGE);
    assert_eq!(call(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(call(&["eval", "m.jsonl"]).0, EXIT_USAGE);
    assert_eq!(call(&["eval", "m.jsonl", "--mode", "sometimes", "-o", "x"]).0, EXIT_USAGE);
    assert_eq!(call(&["--help"]).0, EXIT_OK);
}

#[test]
fn bad_extractor_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.jsonl");
    std::fs::write(&m, "").unwrap();
    let out = dir.path().join("out");
    let (code, _, err) = call(&["eval", p(&m), "--extractor", "neural", "-o", p(&out)]);
    assert_eq!(code, EXIT_USAGE, "{err}");
}

#[test]
fn missing_files_are_io_errors() {
    let dir = tempfile::tempdir().unwrap();
    let gone = dir.path().join("nope.jsonl");
    assert_eq!(call(&["validate", p(&gone)]).0, EXIT_IO);
    assert_eq!(call(&["tas", p(&gone), p(&gone), "--text-b", "가"]).0, EXIT_IO);
}

#[test]
fn malformed_manifest_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.jsonl");
    std::fs::write(&m, "{not json}\n").unwrap();
    let (code, _, err) = call(&["validate", p(&m)]);
    assert_eq!(code, EXIT_DATA);
    assert!(err.contains("line 1"), "{err}");
}

#[test]
fn synth_validate_eval_correlate_tas() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"nPairs": 4, "variation": "FCB", "seed": 9, "canvas": [160, 64]}"#).unwrap();
    let set = dir.path().join("set");
    let (code, out, err) = call(&["synth", p(&cfg), "-o", p(&set)]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.contains("4 pairs"));

    let manifest = set.join("manifest.jsonl");
    let (code, out, _) = call(&["validate", p(&manifest)]);
    assert_eq!(code, EXIT_OK, "{out}");

    let ocr = dir.path().join("ocr.tsv");
    std::fs::write(&ocr, "FCB-00000\tgen\tx\n").unwrap();
    let res = dir.path().join("res");
    let (code, out, err) = call(&["eval", p(&manifest), "--mode", "gtfree", "--ocr", p(&ocr), "-o", p(&res)]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.lines().any(|l| l.starts_with("all")), "{out}");
    assert!(res.join("metrics.csv").is_file() && res.join("report.json").is_file());

    let ratings = dir.path().join("ratings.csv");
    std::fs::write(&ratings, "item,r1,r2\nFCB-00000,1,2\nFCB-00001,3,3\nFCB-00002,4,5\nFCB-00003,2,2\n").unwrap();
    let corr = dir.path().join("corr");
    let (code, out, err) = call(&["correlate", p(&res.join("metrics.csv")), p(&ratings), "-o", p(&corr)]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.contains("spearman,tas,"));
    assert!(corr.join("correlations.csv").is_file());

    let first: serde_json::Value = serde_json::from_str(std::fs::read_to_string(&manifest).unwrap().lines().next().unwrap()).unwrap();
    let img = set.join(first["imageA"].as_str().unwrap());
    let (code, out, err) = call(&["tas", p(&img), p(&img), "--text-b", "가나"]);
    assert_eq!(code, EXIT_OK, "{err}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!((v["tas"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn validate_with_violations_exits_with_data_code() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.jsonl");
    std::fs::write(
        &m,
        r#"{"pairId":"x","lang":"ko","imageA":"a.png","imageB":"b.png","textA":"가","textB":"나","source":"open","split":"eval"}"#,
    )
    .unwrap();
    let (code, out, _) = call(&["validate", p(&m)]);
    assert_eq!(code, EXIT_DATA);
    assert!(out.contains("missing_file"));
}

#[test]
fn unknown_config_fields_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"nPairs": 1, "variation": "T", "seed": 1, "colour": "red"}"#).unwrap();
    assert_eq!(call(&["synth", p(&cfg), "-o", p(&dir.path().join("o"))]).0, EXIT_USAGE);
}
