use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_oracle-infolab"));
    cmd.env_remove("ORACLE_INFOLAB_CAP");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = run(&full);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn num(v: &Value, key: &str) -> f64 {
    v[key]
        .as_f64()
        .unwrap_or_else(|| panic!("{key} missing in {v}"))
}

fn stage<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["stages"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["stage"] == name)
        .unwrap_or_else(|| panic!("no {name} row"))
}

#[test]
fn deutsch_jozsa_stages() {
    let r = json(&["run", "--problem", "dj", "--k", "3"]);
    let post = stage(&r, "post-query");
    let fin = stage(&r, "final");
    let h = 2.403677;
    assert!((num(post, "S(rho_Y)") - h).abs() < 5e-6);
    assert!((num(post, "chi") - 1.0).abs() < 1e-10);
    assert!(num(post, "I(J;Y)").abs() < 1e-10);
    assert!((num(post, "D_Y") - 1.0).abs() < 1e-10);
    assert!((num(fin, "I(J;Y)") - 1.0).abs() < 1e-10);
    assert!(num(fin, "D_Y").abs() < 1e-10);
    assert!((num(fin, "p_success") - 1.0).abs() < 1e-12);
}

#[test]
fn bernstein_vazirani_final_is_classical() {
    let r = json(&["run", "--problem", "bv", "--n", "4", "--stage", "final"]);
    assert_eq!(r["stages"].as_array().unwrap().len(), 1);
    let fin = stage(&r, "final");
    assert!((num(fin, "I(J;Y)") - 4.0).abs() < 1e-9);
    assert!(num(fin, "D_Y").abs() < 1e-9);
}

#[test]
fn single_oracle_file_carries_no_information() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("one.txt");
    fs::write(&file, "m = 2\n---\nonly c 0110\n").unwrap();
    let r = json(&[
        "run",
        "--problem",
        "custom",
        "--file",
        file.to_str().unwrap(),
    ]);
    for row in r["stages"].as_array().unwrap() {
        for key in ["chi", "I(J;Y)", "D_Y"] {
            assert!(num(row, key).abs() < 1e-10, "{key} in {row}");
        }
    }
}

#[test]
fn optimizer_on_commuting_and_orthogonal_ensembles() {
    let simon = json(&[
        "optimize",
        "--problem",
        "simon",
        "--n",
        "2",
        "--restarts",
        "4",
    ]);
    let s = &simon["summary"][0];
    assert_eq!(s["pairwise_commuting"], true);
    assert!(num(s, "d_min") <= 1e-6);
    assert!((num(s, "i_max") - num(s, "chi")).abs() <= 1e-6);

    let bv = json(&["optimize", "--problem", "bv", "--n", "2", "--restarts", "4"]);
    let b = &bv["summary"][0];
    assert_eq!(b["orthogonal_support"], true);
    assert!((num(b, "i_max") - 2.0).abs() <= 1e-6);
    let basis = bv["basis"].as_array().unwrap();
    assert_eq!(basis.len(), 16);
}

#[test]
fn identity_oracle_gives_nothing_to_optimize() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("id.txt");
    fs::write(&file, "m = 1\nalgorithm = sandwich\n---\nid x 01\n").unwrap();
    let r = json(&[
        "optimize",
        "--problem",
        "custom",
        "--file",
        file.to_str().unwrap(),
    ]);
    assert!(num(&r["summary"][0], "i_max").abs() < 1e-9);
}

#[test]
fn table_exit_codes() {
    assert_eq!(run(&["tables", "--which", "3"]).status.code(), Some(0));
    let two = run(&["tables", "--which", "2"]);
    assert_eq!(two.status.code(), Some(4));
    assert!(!two.stdout.is_empty());
}

#[test]
fn table_rows_from_the_cli() {
    let four = json(&["tables", "--which", "4"]);
    let cell = four["table4"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["row"] == "n=2 t=1" && c["column"] == "chi")
        .unwrap();
    assert!((num(cell, "computed") - 0.6302).abs() < 5e-4);

    let phase = json(&["phase", "--n", "3", "--t", "5"]);
    let fin = stage(&phase, "final");
    assert!((num(fin, "chi") - 2.7170).abs() < 5e-4);
    assert!((num(fin, "I(J;Y)") - 2.3683).abs() < 5e-4);
    assert!((num(fin, "D_Y") - 0.3487).abs() < 5e-4);
}

#[test]
fn hsp_spectrum_counts_every_character_tuple() {
    let r = json(&["hsp", "--group", "2,4", "--t", "2"]);
    let total: u64 = r["spectrum"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l["multiplicity"].as_u64().unwrap())
        .sum();
    assert_eq!(total, 64);
    assert_eq!(r["classes"].as_array().unwrap().len(), 8);
}

#[test]
fn configuration_errors_exit_two() {
    let cases: &[&[&str]] = &[
        &["run", "--problem", "dj"],
        &["run", "--problem", "dj", "--k", "2", "--n", "3"],
        &[
            "run",
            "--problem",
            "custom",
            "--file",
            "/nonexistent/problem.txt",
        ],
        &["optimize", "--problem", "bv", "--n", "2", "--tol", "-1"],
        &["hsp", "--group", "0"],
        &["tables", "--which", "9"],
    ];
    for args in cases {
        let out = run(args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let capped = bin()
        .env("ORACLE_INFOLAB_CAP", "zero")
        .args(["run", "--problem", "bv", "--n", "2"])
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(2));
}

fn read_dir_sorted(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let out = run(&[
            "optimize",
            "--problem",
            "simon",
            "--n",
            "2",
            "--restarts",
            "3",
            "--seed",
            "11",
            "--out",
            dir.path().to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let (fa, fb) = (read_dir_sorted(a.path()), read_dir_sorted(b.path()));
    assert!(fa.iter().any(|(n, _)| n == "optimize-simon-n2-t1.json"));
    assert!(fa
        .iter()
        .any(|(n, _)| n == "optimize-simon-n2-t1-summary.csv"));
    assert_eq!(fa, fb);
}

#[test]
fn csv_matches_json_to_six_decimals() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "run",
        "--problem",
        "dj",
        "--k",
        "2",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let csv = fs::read_to_string(dir.path().join("run-dj-k2.csv")).unwrap();
    let report: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("run-dj-k2.json")).unwrap())
            .unwrap();
    let mut lines = csv.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    for (line, row) in lines.zip(report["stages"].as_array().unwrap()) {
        for (col, field) in header.iter().zip(line.split(',')) {
            match &row[*col] {
                Value::Number(n) => {
                    let x = n.as_f64().unwrap();
                    let printed: f64 = field.parse().unwrap();
                    assert!((x - printed).abs() <= 5e-7 + 1e-15, "{col}: {x} vs {field}");
                }
                Value::String(s) => assert_eq!(s, field),
                other => panic!("unexpected {other}"),
            }
        }
    }
}
