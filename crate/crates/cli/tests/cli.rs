use std::process::{Command, Output};

use serde_json::Value;

fn qansible(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qansible"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = qansible(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn strip_duration(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("duration_seconds");
    v
}

#[test]
fn audit_reports_eleven_passing_entries() {
    let v = json(&["audit"]);
    let eqs = v["result"]["equations"].as_array().unwrap();
    assert_eq!(eqs.len(), 11);
    for e in eqs {
        assert!(e["id"].is_string());
        assert!(e["deviation"].as_f64().unwrap() <= 1e-12);
        assert_eq!(e["pass"], Value::Bool(true));
    }
    assert_eq!(v["command"], "audit");
}

#[test]
fn compare_four_even_split() {
    let v = json(&["compare", "--n", "4", "--kx", "2", "--kz", "2"]);
    let ch = &v["result"]["channel"];
    assert!(ch["tvd_true"].as_f64().unwrap().abs() < 1e-12);
    assert!((ch["tvd_paper_gap"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!(ch["mi_true"].as_f64().unwrap().abs() < 1e-12);
    for key in ["mi_paper_model", "trace_distance_states"] {
        assert!(ch[key].is_f64(), "missing {key}");
    }
}

#[test]
fn split_mismatch_is_a_usage_error() {
    let out = qansible(&["enumerate", "--n", "2", "--kx", "3", "--kz", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("split mismatch"));
    assert!(out.stdout.is_empty());
}

#[test]
fn other_usage_errors_exit_two() {
    for args in [
        &["simulate", "--trials", "0"][..],
        &["compare", "--n", "13"],
        &["compare", "--threshold", "0.7"],
        &["enumerate", "--bob-bit", "2"],
        &["frobnicate"],
    ] {
        assert_eq!(qansible(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn enumerate_emits_four_tables_that_sum_to_one() {
    let v = json(&["enumerate", "--n", "3", "--kx", "0", "--kz", "3"]);
    let tables = v["result"]["tables"].as_array().unwrap();
    assert_eq!(tables.len(), 4);
    for t in tables {
        let rows = t["distribution"].as_array().unwrap();
        let total: f64 = rows.iter().map(|r| r["prob"].as_f64().unwrap()).sum();
        assert!((total - 1.0).abs() < 1e-12);
        for r in rows {
            assert!(r["mean_sx"].is_f64() && r["mean_sz"].is_f64());
        }
    }
    let paper_bit1 = tables
        .iter()
        .find(|t| t["bob_bit"] == 1 && t["model"] == "paper_independent_mixture")
        .unwrap();
    assert_eq!(paper_bit1["distribution"].as_array().unwrap().len(), 4);
}

#[test]
fn simulate_is_reproducible_modulo_duration() {
    let args = ["simulate", "--n", "4", "--trials", "3000", "--seed", "11", "--bob-bit", "1"];
    let a = strip_duration(json(&args));
    let b = strip_duration(json(&args));
    assert_eq!(a, b);
    let counts: u64 = a["result"]["distribution"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["count"].as_u64().unwrap())
        .sum();
    assert_eq!(counts, 3000);
    assert!(a["result"]["chi_square"]["p_value"].as_f64().unwrap() > 0.001);
}

#[test]
fn csv_rows_match_json_tables() {
    for cmd in ["audit", "enumerate", "simulate", "compare"] {
        let base = [cmd, "--n", "3", "--trials", "500"];
        let v = json(&base);
        let csv_out = qansible(&[&base[..], &["--format", "csv"]].concat());
        assert!(csv_out.status.success());
        let mut reader = csv::Reader::from_reader(&csv_out.stdout[..]);
        let header = reader.headers().unwrap().clone();
        let rows = reader.records().count();
        let expected = match cmd {
            "audit" => v["result"]["equations"].as_array().unwrap().len(),
            "enumerate" => v["result"]["tables"]
                .as_array()
                .unwrap()
                .iter()
                .map(|t| t["distribution"].as_array().unwrap().len())
                .sum(),
            "simulate" => v["result"]["distribution"].as_array().unwrap().len(),
            _ => 1,
        };
        assert_eq!(rows, expected, "{cmd}");
        if cmd == "compare" {
            let keys: Vec<&str> = header.iter().collect();
            assert_eq!(
                keys,
                ["tvd_true", "tvd_paper_gap", "mi_true", "mi_paper_model", "trace_distance_states"]
            );
        }
    }
}

#[test]
fn out_flag_writes_file_and_config_echo_is_complete() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let p = path.to_str().unwrap();
    let out = qansible(&["compare", "--n", "5", "--kz", "2", "--seed", "3", "--out", p]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let cfg = &v["config"];
    assert_eq!(cfg["command"], "compare");
    assert_eq!(cfg["n_total"], 5);
    assert_eq!(cfg["k_x"], 3);
    assert_eq!(cfg["k_z"], 2);
    assert_eq!(cfg["seed"], 3);
    assert_eq!(cfg["output_format"], "json");
    assert_eq!(cfg["output_path"], p);
    assert!(v["duration_seconds"].as_f64().unwrap() >= 0.0);
}
