use std::path::Path;
use std::process::{Command, Output};

fn mcso(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mcso")).args(args).output().expect("binary runs")
}

fn compute(dir: &Path, config: &str) -> Output {
    let path = dir.join("config.json");
    std::fs::write(&path, config).unwrap();
    mcso(&["compute", "-c", path.to_str().unwrap()])
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<f64>], name: &str) -> Vec<f64> {
    let i = header.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| r[i]).collect()
}

#[test]
fn figure_presets_write_expected_data() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert!(mcso(&["figure", "fig2a", "-o", out]).status.success());
    let (h, rows) = read_csv(&dir.path().join("fig2a.csv"));
    assert!(column(&h, &rows, "q").iter().all(|&q| q < 0.0));

    assert!(mcso(&["figure", "fig1a", "-o", out]).status.success());
    let (h, rows) = read_csv(&dir.path().join("fig1a.csv"));
    let (m, f) = (column(&h, &rows, "m"), column(&h, &rows, "fidelity"));
    for (m, f) in m.iter().zip(&f) {
        if *m == 0.0 {
            assert!((f - 1.0).abs() < 1e-12, "{f}");
        }
    }
}

#[test]
fn unknown_figure_is_a_config_error() {
    let out = mcso(&["figure", "fig11z"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("fig1a"));
}

#[test]
fn wigner_center_of_the_odd_cat() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("w.csv");
    let config = format!(
        r#"{{"quantity": "wigner",
            "params": {{"m": 0, "theta": 0.5, "phi": 0, "alpha0": [1, 0]}},
            "grid": {{"re_min": -4, "re_max": 4, "im_min": -4, "im_max": 4, "nx": 101, "ny": 101}},
            "output": {:?}}}"#,
        csv
    );
    assert!(compute(dir.path(), &config).status.success());
    let (h, rows) = read_csv(&csv);
    assert_eq!(h, ["re", "im", "w"]);
    assert_eq!(rows.len(), 101 * 101);
    let center = rows.iter().find(|r| r[0] == 0.0 && r[1] == 0.0).unwrap();
    assert!((center[2] + 2.0 / std::f64::consts::PI).abs() < 1e-9);
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let run = |threads: &str, name: &str| {
        let csv = dir.path().join(name);
        let config = format!(
            r#"{{"quantity": "squeezing",
                "params": {{"m": {{"values": [1, 3]}}, "theta": {{"start": 0.1, "stop": 1.4, "count": 40}},
                            "phi": 0.3, "alpha0": [0.5, 0.25]}},
                "output": {:?}}}"#,
            csv
        );
        let path = dir.path().join(format!("{name}.json"));
        std::fs::write(&path, config).unwrap();
        assert!(mcso(&["--threads", threads, "compute", "-c", path.to_str().unwrap()]).status.success());
        std::fs::read(csv).unwrap()
    };
    let a = run("1", "a.csv");
    assert_eq!(a, run("3", "b.csv"));
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("m,theta,s\n1,0.1,"));
}

#[test]
fn oracle_check_adds_a_difference_column() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("pc.csv");
    let config = format!(
        r#"{{"quantity": "photocount",
            "params": {{"m": 2, "theta": 0.7, "phi": 0.4, "alpha0": [0.5, 0.5]}},
            "xi": 0.9, "n_max": 8, "oracle_check": true, "output": {:?}}}"#,
        csv
    );
    assert!(compute(dir.path(), &config).status.success());
    let (h, rows) = read_csv(&csv);
    assert_eq!(h, ["n", "p", "oracle_abs_diff"]);
    assert_eq!(rows.len(), 9);
    assert!(column(&h, &rows, "oracle_abs_diff").iter().all(|&d| d < 1e-10));
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        "{not json",
        r#"{"quantity": "fidelity", "params": {"m": 1, "theta": 0.5, "phi": 0, "alpha0": [1, 0]}}"#,
        r#"{"quantity": "photocount", "params": {"m": 1, "theta": 0.5, "phi": 0, "alpha0": [1, 0]},
            "output": "x.csv"}"#,
        r#"{"quantity": "mandel_q", "params": {"m": 1, "theta": 2.0, "phi": 0, "alpha0": [1, 0]},
            "output": "x.csv"}"#,
        r#"{"quantity": "mandel_q", "params": {"m": 1, "theta": 0.5, "phi": 0, "alpha0": [1, 0]},
            "output": "x.csv", "colour": "red"}"#,
    ];
    for config in cases {
        let out = compute(dir.path(), config);
        assert_eq!(out.status.code(), Some(2), "{config}: {}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(mcso(&["compute", "-c", "/nonexistent/config.json"]).status.code(), Some(2));
    assert_eq!(mcso(&["--threads", "0", "verify"]).status.code(), Some(2));
}

#[test]
fn numerical_failures_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let config = format!(
        r#"{{"quantity": "negativity",
            "params": {{"m": 1, "theta": 0.8, "phi": 0, "alpha0": [0.5, 0]}},
            "quadrature": {{"tol": 1e-14, "max_refinements": 3}},
            "output": {:?}}}"#,
        dir.path().join("d.csv")
    );
    let out = compute(dir.path(), &config);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("did not converge"));
}

#[test]
fn verify_passes() {
    let out = mcso(&["verify"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("Odd parity") && text.contains("Even parity"));
    assert!(text.contains(" 0 mismatches"));
}
