use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

fn heatlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heatlab")).args(args).output().expect("spawn heatlab")
}

fn ok(args: &[&str]) -> String {
    let out = heatlab(args);
    assert!(
        out.status.success(),
        "heatlab {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Data rows of a CSV with `#` metadata lines, as (header, rows).
fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

fn json(text: &str) -> serde_json::Value {
    serde_json::from_str(text).unwrap()
}

// Γ(1/3), 20 digits.
const GAMMA_THIRD: f64 = 2.678_938_534_707_747_6;

#[test]
fn tail_values() {
    let (header, rows) = csv_rows(&ok(&["tail", "--kind", "skbm-sup", "--alpha", "1", "--u", "2"]));
    assert_eq!(header, ["u", "survival", "stderr"]);
    let s: f64 = rows[0][1].parse().unwrap();
    assert!((s - 0.295167).abs() <= 1e-6, "{s}");
    assert!((s - 2.0 / PI * 0.5f64.atan()).abs() < 1e-12);

    let (_, rows) = csv_rows(&ok(&["tail", "--kind", "bm", "--u", "0"]));
    assert_eq!(rows[0][1].parse::<f64>().unwrap(), 1.0);

    let (_, rows) = csv_rows(&ok(&["tail", "--kind", "cauchy-sup", "--u", "100"]));
    let s: f64 = rows[0][1].parse().unwrap();
    let bound = 4.0 / (PI * PI) * 100f64.ln() / 1e4;
    assert!((s - 1.0 / (100.0 * PI)).abs() <= bound, "{s}");
}

#[test]
fn tail_grid_is_monotone_and_json_parses() {
    let doc = json(&ok(&["tail", "--kind", "skbm-sup", "--alpha", "1.5", "--points", "12", "--format", "json"]));
    let rows = doc["result"].as_array().unwrap();
    assert_eq!(rows.len(), 12);
    let s: Vec<f64> = rows.iter().map(|r| r["survival"].as_f64().unwrap()).collect();
    assert!(s.windows(2).all(|w| w[1] <= w[0]));
    assert!(doc["meta"]["spec_sha256"].as_str().unwrap().len() == 64);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(heatlab(&["tail", "--kind", "levy", "--u", "1"]).status.code(), Some(2));
    assert_eq!(heatlab(&["heat", "--process", "skbm", "--alpha", "2.5"]).status.code(), Some(2));
    assert_eq!(heatlab(&["heat", "--process", "skbm", "--alpha", "1", "--interval", "1,0"]).status.code(), Some(2));
    assert_eq!(heatlab(&["heat", "--process", "ksbm", "--alpha", "1", "--method", "series"]).status.code(), Some(2));
    assert_eq!(heatlab(&["validate", "--only", "A99"]).status.code(), Some(2));
}

#[test]
fn density_matches_levy_closed_form() {
    // alpha = 1: S_1 is the Lévy distribution with Laplace exponent sqrt(lambda)
    let (header, rows) = csv_rows(&ok(&["density", "--alpha", "1", "--x", "0.05,1,30"]));
    assert_eq!(header, ["x", "density", "method"]);
    for r in rows {
        let x: f64 = r[0].parse().unwrap();
        let g: f64 = r[1].parse().unwrap();
        let exact = (-1.0 / (4.0 * x)).exp() / (2.0 * PI.sqrt() * x.powf(1.5));
        assert!((g - exact).abs() <= 1e-9 * exact.max(1e-3), "x = {x}: {g} vs {exact}");
    }
}

#[test]
fn heat_series_tends_to_length() {
    for (interval, len) in [("0,1", 1.0), ("2,5", 3.0)] {
        let out = ok(&[
            "heat", "--process", "skbm", "--alpha", "1", "--interval", interval, "--t-min", "1e-12", "--t-max", "1e-2",
            "--points", "3",
        ]);
        let (header, rows) = csv_rows(&out);
        assert_eq!(header, ["t", "value", "stderr", "provenance", "bias_diag"]);
        assert_eq!(rows[0][0], "1e-12");
        let q: f64 = rows[0][1].parse().unwrap();
        assert!((q - len).abs() <= 1e-9, "{q}");
        assert_eq!(rows[0][3], "series");
    }
}

#[test]
fn heat_both_processes_ordered() {
    let out = ok(&[
        "heat", "--process", "both", "--alpha", "1.5", "--method", "mc", "--t-min", "1e-3", "--t-max", "1e-1",
        "--points", "3", "--paths", "4000", "--steps", "64", "--seed", "7",
    ]);
    let (header, rows) = csv_rows(&out);
    assert_eq!(header.last().unwrap(), "process");
    let ks: Vec<f64> = rows.iter().filter(|r| r[5] == "ksbm").map(|r| r[1].parse().unwrap()).collect();
    let sk: Vec<f64> = rows.iter().filter(|r| r[5] == "skbm").map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(ks.len(), 3);
    for (k, s) in ks.iter().zip(&sk) {
        assert!(s <= k, "sk {s} > ks {k}");
    }
    // ks rows carry the refinement diagnostic
    assert!(rows.iter().filter(|r| r[5] == "ksbm").all(|r| !r[4].is_empty()));
}

#[test]
fn rerun_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let p = |n: &str| dir.path().join(n).to_str().unwrap().to_string();
    let (first, spec, second, third) = (p("a.csv"), p("spec.json"), p("b.csv"), p("c.csv"));
    ok(&[
        "heat", "--process", "ksbm", "--alpha", "1.5", "--method", "mc", "--points", "3", "--paths", "3000", "--steps",
        "32", "--seed", "11", "--out", &first, "--save-spec", &spec,
    ]);
    ok(&["rerun", "--spec", &spec, "--out", &second]);
    let single = Command::new(env!("CARGO_BIN_EXE_heatlab"))
        .args(["rerun", "--spec", &spec, "--out", &third])
        .env("RAYON_NUM_THREADS", "1")
        .output()
        .unwrap();
    assert!(single.status.success());
    let read = |f: &str| std::fs::read(Path::new(f)).unwrap();
    assert_eq!(read(&first), read(&second));
    assert_eq!(read(&first), read(&third));
    let saved = json(&std::fs::read_to_string(&spec).unwrap());
    assert_eq!(saved["seed"], 11);
}

#[test]
fn expand_coefficients() {
    let doc = json(&ok(&["expand", "--process", "skbm", "--alpha", "1.5", "--interval", "0,1"]));
    let e = &doc["result"]["expansions"][0];
    let c2 = e["c2"].as_f64().unwrap();
    assert!((c2 - 2.0 * (2.0 * GAMMA_THIRD / PI)).abs() < 1e-12, "{c2}");
    assert_eq!(e["constant_provenance"]["c2"]["method"], "closed_form");

    let doc = json(&ok(&["expand", "--process", "ksbm", "--alpha", "1", "--interval", "0,1"]));
    let c2log = doc["result"]["expansions"][0]["c2log"].as_f64().unwrap();
    assert!((c2log - 2.0 / PI).abs() < 1e-15);

    let doc = json(&ok(&["expand", "--process", "skbm", "--alpha", "1.5", "--spectral"]));
    let s = doc["result"]["expansions"][0]["spectral_c3"].as_f64().unwrap();
    assert!((s + 1.930557).abs() < 1e-6, "{s}");
}

#[test]
fn expand_refuses_low_alpha() {
    let out = heatlab(&["expand", "--process", "ksbm", "--alpha", "0.5", "--theorem"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unsupported regime"));
}

#[test]
fn fit_recovers_synthetic_coefficients() {
    for (process, alpha) in [("skbm", "1.5"), ("skbm", "1"), ("ksbm", "1"), ("ksbm", "1.5")] {
        let doc = json(&ok(&[
            "fit", "--process", process, "--alpha", alpha, "--synthetic", "--paths", "2000", "--steps", "64",
        ]));
        let r = &doc["result"];
        let truth = &r["truth"];
        for c in r["fit"]["coefficients"].as_array().unwrap() {
            let key = match c["term"].as_str().unwrap() {
                "power" => "c2",
                "t_log" => "c2log",
                "linear" => "c3",
                other => panic!("{other}"),
            };
            let want = truth[key].as_f64().unwrap();
            let got = c["estimate"].as_f64().unwrap();
            assert!((got - want).abs() <= 1e-10 * want.abs().max(1.0), "{process} {alpha} {key}: {got} vs {want}");
        }
    }
}

#[test]
fn fit_reads_heat_output() {
    let dir = tempfile::tempdir().unwrap();
    let curve = dir.path().join("q.csv");
    let curve = curve.to_str().unwrap();
    ok(&[
        "heat", "--process", "skbm", "--alpha", "1.5", "--t-min", "1e-6", "--t-max", "1e-3", "--points", "30", "--out",
        curve,
    ]);
    let doc = json(&ok(&["fit", "--process", "skbm", "--alpha", "1.5", "--input", curve]));
    let coeffs = doc["result"]["fit"]["coefficients"].as_array().unwrap();
    let c2 = coeffs[0]["estimate"].as_f64().unwrap();
    let c3 = coeffs[1]["estimate"].as_f64().unwrap();
    assert!((c2 / (4.0 * GAMMA_THIRD / PI) - 1.0).abs() < 1e-4, "{c2}");
    // the eigenvalue series' own coefficient of t
    assert!((c3 + 1.930557).abs() < 1e-2, "{c3}");
}

#[test]
fn validate_reports_and_tamper_flips_a2() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let report = report.to_str().unwrap();

    let out = heatlab(&["validate", "--suite", "fast", "--only", "A1,A10,A2", "--out", report]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{stdout}");
    assert_eq!(stdout.lines().filter(|l| l.contains(" PASS ")).count(), 3, "{stdout}");
    let doc = json(&std::fs::read_to_string(report).unwrap());
    let crit = doc["result"]["criteria"].as_array().unwrap();
    assert_eq!(crit.len(), 3);
    for c in crit {
        assert!(c["id"].as_str().unwrap().starts_with('A'));
        let check = &c["checks"][0];
        assert!(check["measured"].is_number() && check["tolerance"].is_number());
    }

    let out = heatlab(&["validate", "--only", "A2", "--tamper", "1e-3", "--out", report]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("A2 FAIL"));
    let doc = json(&std::fs::read_to_string(report).unwrap());
    assert_eq!(doc["result"]["pass"], false);
}
