use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_henneberg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}):\n{}\nstderr:\n{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_h1_default_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("h1.obj");
    let o = run(&["generate", "h1", "--out", path_str(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["vertices"], 129 * 256);
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 33024);
}

#[test]
fn generate_family_domain() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("f.ply");
    let ok = run(&[
        "generate", "family", "--theta2", "0.83", "--n-r", "9", "--n-theta", "16", "--out", path_str(&out),
    ]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    assert_eq!(json(&ok)["format"], "ply");
    assert!(std::fs::read(&out).unwrap().starts_with(b"ply\n"));

    let bad = run(&["generate", "family", "--theta2", "0.70", "--out", path_str(&out)]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("domain"));
}

#[test]
fn generate_refuses_unsolved_custom_data() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("bad.json");
    std::fs::write(&data, r#"{"c": [1, 0], "m": 1, "a": [[2, 0], [1, 1.5707963267948966]]}"#).unwrap();
    let out = dir.path().join("bad.obj");
    let o = run(&["generate", "custom", "--data", path_str(&data), "--out", path_str(&out)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!out.exists());
    let report = json(&o);
    let h = &report["period"]["horizontal"];
    assert!((h[0].as_f64().unwrap() + 3.0).abs() < 1e-12 && h[1].as_f64().unwrap().abs() < 1e-12);
    assert_eq!(report["pass"], false);
}

#[test]
fn generate_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"c": [1, 0], "m": 1, "a": [[1, 0], [1, 1.5707963267948966]],
            "sampling": {"r_min": 0.5, "r_max": 2.0, "n_r": 5, "n_theta": 8, "quotient": true}, "seed": 7}"#,
    )
    .unwrap();
    let out = dir.path().join("q.obj");
    let o = run(&["generate", "custom", "--config", path_str(&cfg), "--out", path_str(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&o)["vertices"], 5 * 4);
}

#[test]
fn verify_h2() {
    let o = run(&["verify", "hm", "--m", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["period"]["periods_pass"], true);
    assert_eq!(r["flux"]["residues"], serde_json::json!([0.0, 0.0, 0.0]));
    assert_eq!(r["isometries"]["count"], 12);
    let mut cusps: Vec<[f64; 2]> = r["stability"]["distinct_branch_images"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| [p[0].as_f64().unwrap(), p[1].as_f64().unwrap()])
        .collect();
    cusps.sort_by(|a, b| a[0].total_cmp(&b[0]));
    let s = 3.0 * 3f64.sqrt() / 8.0;
    let expected = [[-s, 0.375], [0.0, -0.75], [s, 0.375]];
    for (c, e) in cusps.iter().zip(&expected) {
        assert!((c[0] - e[0]).abs() < 1e-12 && (c[1] - e[1]).abs() < 1e-12, "{cusps:?}");
    }
}

#[test]
fn verify_h1_group() {
    let o = run(&["verify", "h1", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["isometries"]["count"], 8);
    assert_eq!(r["seed"], 3);
}

#[test]
fn verify_perturbed_h2_fails() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("p.json");
    std::fs::write(
        &data,
        r#"{"c": [0, 1], "m": 2, "a": [[1, 0], [1, 1.0471975511965976], [1.01, 2.0943951023931953]]}"#,
    )
    .unwrap();
    let o = run(&["verify", "custom", "--data", path_str(&data)]);
    assert_eq!(o.status.code(), Some(1));
    let r = json(&o);
    assert_eq!(r["period"]["periods_pass"], false);
    assert!(r["m2"]["g"].as_f64().unwrap() > 9e-3);
}

#[test]
fn parse_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("broken.json");
    std::fs::write(&data, "{\"c\": [1, 0],\n \"m\": 1,\n \"b\": 2}").unwrap();
    let o = run(&["verify", "custom", "--data", path_str(&data)]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("unknown field `b`") && err.contains("line 3"), "{err}");

    assert_eq!(run(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "hm"]).status.code(), Some(2));
}

#[test]
fn search_m1_small_grid() {
    let o = run(&["search-m1", "--n-radial", "9", "--n-angular", "16"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["all_henneberg"], true);
    assert!(!r["minimizers"].as_array().unwrap().is_empty());

    let o = run(&["search-m1", "--n-radial", "9", "--n-angular", "16", "--r1-min", "1.5", "--r1-max", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(json(&o)["minimizers"].as_array().unwrap().is_empty());
}

#[test]
fn continue_examples() {
    let o = run(&["continue", "--r1", "1", "--r2", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let p = &json(&o)["point"];
    assert!((p["theta2"].as_f64().unwrap() - std::f64::consts::FRAC_PI_3).abs() < 1e-14);

    let o = run(&["continue", "--r1", "1.05", "--r2", "1.0"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert!(r["residual"].as_f64().unwrap() < 1e-12);
    assert_eq!(r["period"]["solved"], true);
}

#[test]
fn continue_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let start = dir.path().join("start.json");
    let o = run(&["continue", "--r1", "1.02", "--r2", "0.99"]);
    std::fs::write(&start, json(&o)["point"].to_string()).unwrap();
    let o = run(&["continue", "--r1", "1.05", "--r2", "1.0", "--from", path_str(&start)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn bjorling_examples() {
    for (n, name) in [("3", "H_2"), ("4", "H_1^*"), ("6", "H_1/2")] {
        let o = run(&["bjorling", "--cusps", n]);
        assert_eq!(o.status.code(), Some(0));
        let r = json(&o);
        assert_eq!(r["closed_form"], name);
        assert!(r["sup_error"].as_f64().unwrap() < 1e-6);
    }
    assert_eq!(run(&["bjorling", "--cusps", "2"]).status.code(), Some(2));
}

#[test]
fn bjorling_astroid_mesh() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("astroid.obj");
    let o = run(&["bjorling", "--astroid", "--n-u", "6", "--n-v", "3", "--out", path_str(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 18);
}

#[test]
fn thread_cap() {
    let ok = Command::new(env!("CARGO_BIN_EXE_henneberg"))
        .args(["verify", "h1"])
        .env("HF_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = Command::new(env!("CARGO_BIN_EXE_henneberg"))
        .args(["verify", "h1"])
        .env("HF_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn deterministic_output() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.obj");
    let b = dir.path().join("b.obj");
    for p in [&a, &b] {
        let o = run(&["generate", "hm-even", "--k", "1", "--n-r", "7", "--n-theta", "12", "--out", path_str(p)]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}
