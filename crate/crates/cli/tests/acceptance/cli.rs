//! Command-line behaviour: formats, determinism, exit codes, precision
//! selection.

use crate::serial;
use std::process::{Command, Output};

fn ggue_pd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ggue-pd"))
        .args(args)
        .env_remove("GGUE_PD_PRECISION")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "failed: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Significant digits of a decimal such as `-1.234e+1`.
fn mantissa_digits(x: &str) -> usize {
    let m = x.split('e').next().unwrap();
    m.chars().filter(|c| c.is_ascii_digit()).count()
}

#[test]
fn positivity_csv_columns_and_rows() {
    let _g = serial();
    let out = stdout(&ggue_pd(&["positivity", "--lambda", "0,1", "--n-min", "2", "--n-max", "4", "--n-step", "2"]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "lambda,N,log_p_exact,log_p_asymptotic,abs_error,log10_abs_error");
    assert_eq!(lines.len(), 5);
    let keys: Vec<(&str, &str)> = lines[1..]
        .iter()
        .map(|l| {
            let mut f = l.split(',');
            (f.next().unwrap(), f.next().unwrap())
        })
        .collect();
    assert_eq!(keys, [("0", "2"), ("0", "4"), ("1", "2"), ("1", "4")]);
    for l in &lines[1..] {
        let v: Vec<f64> = l.split(',').skip(2).map(|x| x.parse().unwrap()).collect();
        assert!(v[0] < 0.0 && v[2] > 0.0);
        assert!((v[2].log10() - v[3]).abs() < 1e-9);
    }
}

#[test]
fn output_is_deterministic_and_file_matches_stdout() {
    let _g = serial();
    let args = ["coeffs", "--lambda", "3/2", "--s", "7/10", "--n", "4"];
    let a = stdout(&ggue_pd(&args));
    let b = stdout(&ggue_pd(&args));
    assert_eq!(a, b);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("coeffs.csv");
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    assert!(stdout(&ggue_pd(&with_out)).is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), a);
}

#[test]
fn coeffs_json_has_vanishing_residuals() {
    let _g = serial();
    let out = stdout(&ggue_pd(&["coeffs", "--lambda", "1", "--s", "1/2", "--n", "3", "--format", "json"]));
    let rows: serde_json::Value = serde_json::from_str(&out).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    for r in rows {
        for k in ["r1", "r2"] {
            let v: f64 = r[k].as_str().unwrap().parse().unwrap();
            assert!(v.abs() < 1e-150);
        }
        let beta: f64 = r["beta"].as_str().unwrap().parse().unwrap();
        assert!(beta > 0.0);
    }
}

#[test]
fn partition_at_s0_matches_closed_form() {
    let _g = serial();
    let out = stdout(&ggue_pd(&["partition", "--lambda", "-1/2", "--s", "0", "--n", "6"]));
    let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[3], row[5]);
    assert_eq!(row[2], "6");
}

#[test]
fn figure_defaults_cover_three_lambdas() {
    let _g = serial();
    let out = stdout(&ggue_pd(&["figure1", "--n-max", "8"]));
    let lambdas: Vec<&str> = out.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(lambdas, ["0", "0", "1", "1", "2", "2"]);
}

#[test]
fn invalid_arguments_exit_2() {
    let _g = serial();
    for args in [
        vec!["positivity", "--lambda=-2", "--n", "3"],
        vec!["positivity", "--lambda", "abc", "--n", "3"],
        vec!["positivity", "--lambda", "0", "--n", "0"],
        vec!["positivity", "--lambda", "0", "--n-min", "5", "--n-max", "3"],
        vec!["positivity", "--lambda", "0", "--n", "3", "--precision", "10"],
        vec!["coeffs", "--lambda", "0", "--s", "3/2", "--n", "3"],
        vec!["frobnicate"],
    ] {
        let o = ggue_pd(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn unconverged_precision_exits_3() {
    let _g = serial();
    let o = ggue_pd(&["positivity", "--lambda", "0", "--n", "120", "--precision", "50"]);
    assert_eq!(o.status.code(), Some(3));
    let msg = String::from_utf8_lossy(&o.stderr);
    assert!(msg.contains("N = 120"), "{msg}");
}

#[test]
fn precision_flag_beats_environment() {
    let _g = serial();
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_ggue-pd"));
        c.args(["partition", "--lambda", "0", "--s", "1", "--n", "3"]);
        match env {
            Some(v) => c.env("GGUE_PD_PRECISION", v),
            None => c.env_remove("GGUE_PD_PRECISION"),
        };
        if let Some(f) = flag {
            c.args(["--precision", f]);
        }
        let out = stdout(&c.output().unwrap());
        let row: Vec<String> = out.lines().nth(1).unwrap().split(',').map(String::from).collect();
        row
    };
    let default = run(None, None);
    let from_env = run(Some("60"), None);
    let from_flag = run(Some("60"), Some("90"));
    // reported digits are min(50, precision - 20)
    assert_eq!(mantissa_digits(&default[3]), 50);
    assert_eq!(mantissa_digits(&from_env[3]), 40);
    assert_eq!(mantissa_digits(&from_flag[3]), 50);
    assert_eq!(default[3], from_flag[3]);
    assert!(default[4].parse::<u32>().unwrap() >= 190);
    assert!(from_env[4].parse::<u32>().unwrap() < 100);
}
