use std::path::Path;
use std::process::{Command, Output};

fn capax(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_capax"))
        .args(args)
        .current_dir(dir)
        .env_remove("CAPAX_THREADS")
        .output()
        .expect("spawn capax")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn files_in(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> =
        std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    v.sort();
    v
}

#[test]
fn closed_capacity_of_segment() {
    let dir = tempfile::tempdir().unwrap();
    let o = capax(&["capacity", "--set", r#"{"interval_union":[-2,2]}"#], dir.path());
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["capacity"], 1.0);
}

#[test]
fn enumerate_csv_counts() {
    let dir = tempfile::tempdir().unwrap();
    let o = capax(&["enumerate", "--segment", "-2,2", "--max-degree", "3", "--emit", "csv"], dir.path());
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "degree,c0,c1,c2,c3,root1,root2,root3");
    let degrees: Vec<usize> = lines.map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    // Monic integer polynomials with every root in [-2, 2], by degree.
    for (d, want) in [(1, 5), (2, 19), (3, 59)] {
        assert_eq!(degrees.iter().filter(|&&x| x == d).count(), want, "degree {d}");
    }
}

#[test]
fn validation_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["capacity"],
        vec!["capacity", "--set", r#"{"finite_set":[[0,0],[1,0]]}"#],
        vec!["capacity", "--set", r#"{"interval_union":[2,-2]}"#],
        vec!["capacity", "--set", "not json"],
        vec!["enumerate", "--segment", "1,0", "--max-degree", "2"],
        vec!["robinson", "--p", r#"{"coeffs":["0","1"]}"#, "--m", "2"],
        vec!["--threads", "0", "capacity", "--set", r#"{"circle":1}"#],
        vec!["capacity", "--set", r#"{"circle":1}"#, "--tol", "bogus=1"],
        vec!["nosuchcommand"],
    ] {
        let o = capax(&args, dir.path());
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn numerical_failure_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    // Degree 2 at rho = 3/2 needs a Gamma far beyond a cap of 10.
    let o = capax(
        &["lemniscate", "shrink", "--p", r#"{"coeffs":["-1/2","0","1"]}"#, "--rho", "3/2", "--degree-cap", "10"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(3));
    // Critical value -3 of x^2 - 3 sits exactly on the level M = 3.
    let o = capax(&["robinson", "--p", r#"{"coeffs":["-3","0","1"]}"#, "--m", "3"], dir.path());
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn same_seed_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, seed: &str| {
        let o = capax(
            &["fekete", "--set", r#"{"interval_union":[-1,1]}"#, "--n", "9", "--multistarts", "4", "--seed", seed, "--out", name],
            dir.path(),
        );
        assert!(o.status.success());
        std::fs::read(dir.path().join(name)).unwrap()
    };
    let a = run("a.json", "7");
    let b = run("b.json", "7");
    assert_eq!(a, b);
    let o = capax(&["--threads", "1", "--seed", "7", "fekete", "--set", r#"{"interval_union":[-1,1]}"#, "--n", "9", "--multistarts", "4"], dir.path());
    assert_eq!(o.stdout, a);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"command":"capacity","params":{"set":{"circle":2}},"output":{"path":"cap.json"}}"#).unwrap();
    let o = capax(&["--config", "run.json"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("cap.json")).unwrap()).unwrap();
    assert_eq!(v["capacity"], 2.0);

    let o = capax(&["--config", "run.json", "capacity", "--set", r#"{"disk":3}"#], dir.path());
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("cap.json")).unwrap()).unwrap();
    assert_eq!(v["capacity"], 3.0);

    let o = capax(&["--config", "run.json", "enumerate"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_config_keys_rejected() {
    let dir = tempfile::tempdir().unwrap();
    for (i, text) in [
        r#"{"command":"capacity","params":{"set":{"circle":1}},"extra":true}"#,
        r#"{"command":"capacity","params":{"set":{"circle":1},"radius":2}}"#,
        r#"{"command":"capacity","params":{"set":{"circle":1}},"output":{"path":"x","mode":"w"}}"#,
    ]
    .iter()
    .enumerate()
    {
        let name = format!("c{i}.json");
        std::fs::write(dir.path().join(&name), text).unwrap();
        let o = capax(&["--config", &name], dir.path());
        assert_eq!(o.status.code(), Some(2), "{text}");
    }
}

#[test]
fn failed_run_leaves_no_files() {
    let dir = tempfile::tempdir().unwrap();
    let before = files_in(dir.path());
    let o = capax(
        &["lemniscate", "shrink", "--p", r#"{"coeffs":["-1/2","0","1"]}"#, "--rho", "3/2", "--degree-cap", "10", "--out", "g.json"],
        dir.path(),
    );
    assert!(!o.status.success());
    let o = capax(&["capacity", "--set", r#"{"finite_set":[[0,0]]}"#, "--out", "g.json"], dir.path());
    assert!(!o.status.success());
    assert_eq!(files_in(dir.path()), before);
}

#[test]
fn plot_tables() {
    let dir = tempfile::tempdir().unwrap();
    let o = capax(
        &["enumerate", "--segment", "-2,2", "--max-degree", "4", "--out", "e.json", "--plot", "degree-histogram", "--plot-out", "h.csv"],
        dir.path(),
    );
    assert!(o.status.success());
    let h = std::fs::read_to_string(dir.path().join("h.csv")).unwrap();
    assert_eq!(h.lines().next(), Some("degree,polynomials,algebraic_integers"));
    assert_eq!(h.lines().nth(4), Some("4,165,660"));

    let o = capax(
        &["robinson", "--p", r#"{"coeffs":["0","1"]}"#, "--m", "3", "--budget", "32", "--plot", "cdf-pair", "--plot-out", "c.csv"],
        dir.path(),
    );
    assert!(o.status.success());
    let c = std::fs::read_to_string(dir.path().join("c.csv")).unwrap();
    assert_eq!(c.lines().count(), 202);

    let o = capax(&["fekete", "--set", r#"{"circle":1}"#, "--n", "6", "--plot", "fekete-scatter", "--plot-out", "f.csv"], dir.path());
    assert!(o.status.success());
    assert_eq!(std::fs::read_to_string(dir.path().join("f.csv")).unwrap().lines().count(), 7);

    let o = capax(&["fekete", "--set", r#"{"circle":1}"#, "--n", "6", "--plot", "degree-histogram", "--plot-out", "x.csv"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn version_and_help() {
    let dir = tempfile::tempdir().unwrap();
    let o = capax(&["--version"], dir.path());
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("capax "));
    let o = capax(&["--help"], dir.path());
    assert!(o.status.success());
    for sub in ["capacity", "enumerate", "fekete", "equilibrium", "chebyshev", "lemniscate", "robinson", "pellabel"] {
        assert!(stdout(&o).contains(sub), "{sub}");
    }
}

#[test]
fn periods_and_equilibrium() {
    let dir = tempfile::tempdir().unwrap();
    // D = (x^2 - 1)(x^2 - 4): two symmetric bands, each carrying half the mass.
    let o = capax(&["pellabel", "periods", "--d", r#"{"coeffs":["4","0","-5","0","1"]}"#], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for f in v["fractions"].as_array().unwrap() {
        assert!((f.as_f64().unwrap() - 0.5).abs() < 1e-9);
    }
    let o = capax(&["equilibrium", "--set", r#"{"interval_union":[-2,2]}"#, "--grid", "200"], dir.path());
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["report"]["robin_constant"].as_f64().unwrap().abs() < 5e-3);
    assert_eq!(v["frostman_passed"], true);
}
