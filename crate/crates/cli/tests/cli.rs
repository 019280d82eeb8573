use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn fracton(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracton"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

fn write_amplitudes(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn distribution_semion_point() {
    let out = fracton(&["distribution", "--h", "3/2", "--xi", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("xi,Y,n,theta,p,q,identity_defect\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 1);
    let n: f64 = rows[0][2].parse().unwrap();
    assert!((n - 0.894_427_191_0).abs() < 1e-10);
}

#[test]
fn distribution_fermi_point_and_decimal_class() {
    for h in ["1", "1.0", "1/1"] {
        let out = fracton(&["distribution", "--h", h, "--xi-grid", "1,1,1"]);
        assert_eq!(out.status.code(), Some(0));
        let rows = csv_rows(&stdout(&out));
        assert_eq!(rows[0][2].parse::<f64>().unwrap(), 0.5);
    }
}

#[test]
fn distribution_bose_rows_fail() {
    let out = fracton(&["distribution", "--h", "2", "--xi-grid", "0.5,0.9,3"]);
    assert_eq!(out.status.code(), Some(2));
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r[1] == "ERROR:bose-divergence" && r.len() == 7));
}

#[test]
fn distribution_multiple_classes_and_round_trip() {
    let out = fracton(&["distribution", "--h", "1,3/2,5/3", "--xi-grid", "1e-3,1e3,11", "--spacing", "log"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("h,xi,"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 33);
    for row in &rows {
        for cell in &row[1..] {
            let v: f64 = cell.parse().unwrap();
            assert_eq!(format!("{v:.16e}"), *cell);
        }
        assert!(row[7].parse::<f64>().unwrap() <= 1e-10);
    }
}

#[test]
fn distribution_energy_grid_matches_xi() {
    let a = stdout(&fracton(&["distribution", "--h", "3/2", "--energy-grid", "-2,2,5"]));
    let xis: Vec<f64> = csv_rows(&a).iter().map(|r| r[0].parse().unwrap()).collect();
    assert!((xis[0] - (-2f64).exp()).abs() < 1e-15);
    assert!((xis[2] - 1.0).abs() < 1e-15);
}

#[test]
fn distribution_json() {
    let out = fracton(&["distribution", "--h", "1", "--xi", "1", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v[0]["n"].as_f64(), Some(0.5));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["distribution", "--h", "3/2"][..],
        &["distribution", "--h", "5/2", "--xi", "1"],
        &["distribution", "--h", "1", "--xi-grid", "2,1,5"],
        &["distribution", "--h", "1", "--xi-grid", "0,1,5"],
        &["distribution", "--h", "1", "--xi", "1", "--format", "dot"],
        &["entanglement-curve", "--h", "3/2", "--p-grid", "0,2,3"],
        &["table", "--h", "2"],
        &["frobnicate"],
    ] {
        assert_eq!(fracton(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn entanglement_curve_values() {
    let out = fracton(&["entanglement-curve", "--h", "1,4/3,3/2,5/3", "--p-grid", "0,1,3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("p,E[1],E[4/3],E[3/2],E[5/3]\n"));
    let rows: Vec<Vec<f64>> = csv_rows(&text)
        .iter()
        .map(|r| r.iter().map(|c| c.parse().unwrap()).collect())
        .collect();
    assert!(rows[0][1..].iter().all(|&e| e == 0.0));
    let expected = [1.0, 1.2, 4.0 / 3.0, 1.5];
    for (got, want) in rows[1][1..].iter().zip(expected) {
        assert!((got - want).abs() < 1e-12);
    }
}

#[test]
fn state_reports() {
    let dir = tempfile::tempdir().unwrap();
    let six = write_amplitudes(
        dir.path(),
        "six.txt",
        "# h = 3/2, 3 modes, 4 particles\n121 1 0\n022 1 0\n211 1 0\n202 1 0\n112 1 0\n220 1 0\n",
    );
    // unnormalized on purpose: the file must be normalized
    let out = fracton(&["state", "--h", "3/2", "--modes", "3", "--particles", "4", "--amplitudes", &six]);
    assert_eq!(out.status.code(), Some(2));

    let c = (1.0f64 / 6.0).sqrt();
    let body: String = ["121", "022", "211", "202", "112", "220"]
        .iter()
        .map(|k| format!("|{k}> {c:.17} 0\n"))
        .collect();
    let six = write_amplitudes(dir.path(), "six.txt", &body);
    let out = fracton(&["state", "--h", "3/2", "--modes", "3", "--particles", "4", "--amplitudes", &six]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["basis_size"], 6);
    assert_eq!(v["per_term"].as_array().unwrap().len(), 6);
    let total = v["total_entanglement_bits"].as_f64().unwrap();
    assert!((total - 4.254_692_2).abs() < 1e-6, "{total}");

    let c = (1.0f64 / 3.0).sqrt();
    let three = write_amplitudes(dir.path(), "three.txt", &format!("100 {c:.17} 0\n010 0 {c:.17}\n001 {c:.17} 0\n"));
    let out = fracton(&["state", "--h", "1", "--modes", "3", "--particles", "1", "--amplitudes", &three]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let total = v["total_entanglement_bits"].as_f64().unwrap();
    assert!((total - (3.0 * 3f64.log2() - 2.0)).abs() < 1e-9);
}

#[test]
fn state_rejects_ket_outside_basis() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_amplitudes(dir.path(), "bad.txt", "121 0.6 0\n\n221 0.8 0\n");
    let out = fracton(&["state", "--h", "3/2", "--modes", "3", "--particles", "4", "--amplitudes", &file]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 3") && err.contains("221"), "{err}");
}

#[test]
fn farey_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let dual = dir.path().join("dual.csv");
    let table = dir.path().join("table.csv");
    let out = fracton(&[
        "farey",
        "--max-den",
        "3",
        "--band",
        "0",
        "--dual-pairs",
        dual.to_str().unwrap(),
        "--table",
        table.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let dot = stdout(&out);
    assert_eq!(dot.matches("[label=").count(), 3);
    assert_eq!(dot.matches(" -- ").count(), 2);
    let dual = std::fs::read_to_string(dual).unwrap();
    assert!(dual.lines().any(|l| l == "2/3,1/3,4/3,5/3"), "{dual}");
    let table = std::fs::read_to_string(table).unwrap();
    assert!(table.lines().any(|l| l == "3/2,1/2,2/1"), "{table}");

    let json: Value = serde_json::from_str(&stdout(&fracton(&["farey", "--max-den", "3", "--format", "json"]))).unwrap();
    assert_eq!(json["edges"].as_array().unwrap().len(), 2);

    let empty = fracton(&["farey", "--max-den", "1", "--band", "0"]);
    assert_eq!(empty.status.code(), Some(0));
    assert_eq!(stdout(&empty), "graph transitions {\n}\n");
}

#[test]
fn table_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let out = fracton(&["table", "--h", "5/3,3/2", "--bands", "4", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "h,nu,n");
    assert_eq!(lines.len(), 9);
    assert!(lines.contains(&"5/3,7/3,3/1"));
    assert!(lines.contains(&"3/2,5/2,2/1"));
}

#[test]
fn output_is_deterministic() {
    let args = ["distribution", "--h", "4/3,1.7", "--xi-grid", "0.01,100,25"];
    assert_eq!(fracton(&args).stdout, fracton(&args).stdout);
    let args = ["farey", "--max-den", "9", "--band", "2"];
    assert_eq!(fracton(&args).stdout, fracton(&args).stdout);
}

#[test]
fn verify_passes_and_reports_info() {
    let out = fracton(&["verify"]);
    let text = stdout(&out);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(!text.contains("FAIL "));
    assert!(text.contains("INFO  entropy/normalization"));
    assert!(text.contains("INFO  entanglement/symmetry"));
}

#[test]
fn verify_detects_degraded_solver() {
    let out = fracton(&["verify", "--only", "solver", "--solver-tol", "1e-2"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.lines().any(|l| l.starts_with("FAIL  solver/partition-identity")), "{text}");
}

#[test]
fn verify_filters_by_module() {
    let text = stdout(&fracton(&["verify", "--only", "entropy"]));
    let names: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("PASS") || l.starts_with("FAIL"))
        .map(|l| l.split_whitespace().nth(1).unwrap())
        .collect();
    assert!(!names.is_empty());
    assert!(names.iter().all(|n| n.starts_with("entropy/")), "{names:?}");
}
