use std::process::{Command, Output};

use serde_json::Value;

fn ahlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ahlab"))
        .args(args)
        .env_remove("AHLAB_CACHE_DIR")
        .output()
        .expect("spawn ahlab")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "{e}: stdout {:?} stderr {:?}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

#[test]
fn verify_sextic_threefolds() {
    let out = ahlab(&["verify-ah", "--n", "3", "--d", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let case = &v["result"]["cases"][0];
    assert_eq!(case["k"], 21);
    assert_eq!(case["independent"], true);
    assert_eq!(case["report"]["computed"], 84);
    assert_eq!(case["certificate"]["check"]["accepted"], true);
}

#[test]
fn decomposes_three_powers() {
    let out = ahlab(&["sylvester", "--coeffs", "2,1,1,1,1,2", "--decompose"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let dec = &v["result"]["decomposition"];
    assert_eq!(dec["exact"], true);
    let mut forms: Vec<(f64, f64)> = dec["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| {
            let re = |z: &Value| z.as_array().unwrap()[0].as_f64().unwrap();
            (re(&t["form"][0]), re(&t["form"][1]))
        })
        .collect();
    forms.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(forms, vec![(0.0, 1.0), (1.0, 0.0), (1.0, 1.0)]);
}

#[test]
fn cubic_defect_in_p4() {
    let out = ahlab(&["hilbert", "--n", "4", "--d", "3", "--points", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["report"]["defect"], 1);
    assert_eq!(v["result"]["predicted_exception"], true);
}

#[test]
fn csv_has_the_sweep_header() {
    let out = ahlab(&[
        "hilbert", "--n", "2", "--d", "4", "--points", "5", "--format", "csv",
    ]);
    let s = String::from_utf8(out.stdout).unwrap();
    let mut lines = s.lines();
    assert_eq!(
        lines.next(),
        Some("n,d,k,expected,computed,defect,verdict,seed,prime")
    );
    assert!(lines
        .next()
        .unwrap()
        .starts_with("2,4,5,15,14,1,defective-evidence,"));
}

#[test]
fn cache_hits_are_flagged() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = [
        "--cache-dir",
        d,
        "hilbert",
        "--n",
        "3",
        "--d",
        "4",
        "--points",
        "8",
    ];
    let first = json(&ahlab(&args));
    let second = json(&ahlab(&args));
    assert_eq!(first["cached"], false);
    assert_eq!(second["cached"], true);
    assert_eq!(first["result"], second["result"]);

    let sweep = ["--cache-dir", d, "sweep", "--n", "2", "--d", "2..4"];
    let a = json(&ahlab(&sweep));
    let b = json(&ahlab(&sweep));
    assert_eq!(a["result"]["cache_hits"], 0);
    assert_eq!(
        b["result"]["cache_hits"],
        a["result"]["rows"].as_array().unwrap().len()
    );
    assert_eq!(a["result"]["rows"], b["result"]["rows"]);
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(ahlab(&["--bogus"]).status.code(), Some(1));
    assert_eq!(ahlab(&["hilbert", "--d", "3"]).status.code(), Some(1));
    assert_eq!(
        ahlab(&["--prime", "10", "hilbert", "--n", "2", "--d", "2", "--points", "1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        ahlab(&["sylvester", "--coeffs", "1,x"]).status.code(),
        Some(1)
    );
    assert_eq!(ahlab(&["--help"]).status.code(), Some(0));
}

#[test]
fn results_are_reproducible() {
    let args = ["--seed", "7", "sweep", "--n", "1..3", "--d", "3..5"];
    let a = json(&ahlab(&args));
    let b = json(&ahlab(&args));
    assert_eq!(
        serde_json::to_string(&a["result"]).unwrap(),
        serde_json::to_string(&b["result"]).unwrap()
    );
    assert_eq!(a["config"], b["config"]);
}

#[test]
fn tampered_certificate_exits_2() {
    let out = ahlab(&["certificate", "--n", "3", "--d", "6", "--k", "21"]);
    assert_eq!(out.status.code(), Some(0));
    let mut cert = json(&out)["result"]["certificate"].clone();
    let root = cert["nodes"]
        .as_array_mut()
        .unwrap()
        .iter_mut()
        .find(|n| n["u"].is_u64())
        .unwrap();
    root["u"] = Value::from(root["u"].as_u64().unwrap() + 3);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cert.json");
    std::fs::write(&path, serde_json::to_string(&cert).unwrap()).unwrap();
    let out = ahlab(&["certificate", "--check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["result"]["check"]["accepted"], false);
}

#[test]
fn witness_for_quartics_through_five_points() {
    let out = ahlab(&["witness", "--n", "2", "--d", "4", "--k", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["witness"]["verified"], true);
    assert_eq!(
        ahlab(&["witness", "--n", "2", "--d", "4", "--k", "4"])
            .status
            .code(),
        Some(1)
    );
}
