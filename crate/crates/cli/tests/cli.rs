use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subgrowth"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn a_column(text: &str) -> Vec<String> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().to_string())
        .collect()
}

#[test]
fn coefficient_listings() {
    let z2 = stdout(&["coeffs", "--group", "Z2", "--max-n", "6"]);
    assert_eq!(z2.lines().next(), Some("n,a_n"));
    assert_eq!(z2.lines().last(), Some("6,12"));
    assert_eq!(a_column(&z2), ["1", "3", "4", "7", "6", "12"]);
    let heis = stdout(&["coeffs", "--group", "heis", "--max-n", "4"]);
    assert_eq!(a_column(&heis), ["1", "3", "4", "19"]);
    let z1 = stdout(&["coeffs", "--group", "Z1", "--max-n", "3"]);
    assert_eq!(a_column(&z1), ["1", "1", "1"]);
}

#[test]
fn json_mirrors_big_integers_as_strings() {
    let text = stdout(&["coeffs", "--group", "Z4", "--max-n", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["rows"][2]["a_n"], "40");
}

#[test]
fn empty_grid_gives_a_header_only() {
    let text = stdout(&["clt-scan", "--group", "Z2", "--n-grid", ""]);
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("n,exact_mean,exact_var,"));
    assert!(text.trim_end().ends_with("coeff_len,terms"));
}

#[test]
fn heisenberg_scan_rows() {
    let text = stdout(&["clt-scan", "--group", "heis", "--n-grid", "20,40"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    let header: Vec<&str> = lines[0].split(',').collect();
    let var = header.iter().position(|c| *c == "exact_var").unwrap();
    for l in &lines[1..] {
        let v: f64 = l.split(',').nth(var).unwrap().parse().unwrap();
        assert!(v > 0.0);
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = |name: &str| {
        vec![
            "moments".to_string(),
            "--group".into(),
            "Z2".into(),
            "--n".into(),
            "12".into(),
            "--x".into(),
            "3/2".into(),
            "--samples".into(),
            "500".into(),
            "--seed".into(),
            "7".into(),
            "--format".into(),
            "json".into(),
            "--out".into(),
            dir.path().join(name).to_string_lossy().into_owned(),
        ]
    };
    for name in ["a.json", "b.json"] {
        let a = args(name);
        let refs: Vec<&str> = a.iter().map(String::as_str).collect();
        assert!(run(&refs).status.success());
    }
    let a = std::fs::read(dir.path().join("a.json")).unwrap();
    let b = std::fs::read(dir.path().join("b.json")).unwrap();
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["seed"], 7);
    assert_eq!(v["x"], "3/2");

    let scan = ["clt-scan", "--group", "Z2", "--n-grid", "10,20"];
    assert_eq!(stdout(&scan), stdout(&scan));
}

#[test]
fn cached_and_uncached_tables_agree() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let plain = stdout(&["orbit-table", "--group", "heis", "--max-n", "12"]);
    let first = run(&["orbit-table", "--group", "heis", "--max-n", "12", "--cache-dir", cache]);
    assert!(String::from_utf8_lossy(&first.stderr).contains("miss"));
    let second = run(&["orbit-table", "--group", "heis", "--max-n", "12", "--cache-dir", cache]);
    assert!(String::from_utf8_lossy(&second.stderr).contains("hit"));
    assert_eq!(plain.as_bytes(), first.stdout.as_slice());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn stirling_row_and_logcc() {
    let row = stdout(&["orbit-table", "--group", "Z1", "--n", "4"]);
    let counts: Vec<&str> = row.lines().skip(1).map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(counts, ["0", "6", "11", "6", "1"]);
    let lc = stdout(&["logcc", "--group", "Z1", "--n", "4"]);
    assert_eq!(lc.lines().nth(1), Some("4,2,0,"));
    let json = stdout(&["logcc", "--group", "Z2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["n_max"], 60);
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn numeric_rows_carry_metadata() {
    let text = stdout(&["saddle-check", "--group", "Z2", "--n", "30"]);
    let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
    let values: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let get = |c: &str| values[header.iter().position(|h| *h == c).unwrap()];
    assert!(get("rel_error").parse::<f64>().unwrap() < 1e-8);
    assert_eq!(get("tol"), "1e-12");
    assert!(get("coeff_len").parse::<usize>().unwrap() >= 1024);
    let p = stdout(&["predict", "--group", "heis", "--n", "100", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&p).unwrap();
    assert!(v["predicted_var"].as_f64().unwrap() > 0.0);
    assert!(v["terms"].as_u64().unwrap() > 0);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["coeffs", "--group", "nope", "--max-n", "3"]).status.code(), Some(2));
    assert_eq!(run(&["coeffs", "--max-n", "3"]).status.code(), Some(2));
    assert_eq!(run(&["moments", "--group", "Z2", "--n", "5", "--x", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["predict", "--group", "Z2", "--n", "5", "--tol", "2"]).status.code(), Some(2));
    assert_eq!(run(&["clt-scan", "--group", "Z2", "--n-grid", "20,10"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    // n/x = 1e11 pushes the saddle below what the largest automatic table certifies
    assert_eq!(run(&["predict", "--group", "Z2", "--n", "100", "--x", "1e-9"]).status.code(), Some(3));
}

#[test]
fn brute_force_suite() {
    let text = stdout(&["verify", "--suite", "brute", "--n", "5"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "suite,passed,checks,counterexample,notes");
    assert!(lines[1].starts_with("brute,true,"), "{}", lines[1]);
}

#[test]
fn corrupted_cache_is_detected_and_rebuilt() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    stdout(&["verify", "--suite", "cache", "--cache-dir", cache]);
    let path = dir.path().join("Z2.orbits.json");
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::write(&path, text.replacen("\"3\"", "\"5\"", 1)).unwrap();
    let out = stdout(&["verify", "--suite", "cache", "--cache-dir", cache]);
    assert!(out.contains("Z2: corrupt"), "{out}");
    assert!(out.lines().nth(1).unwrap().starts_with("cache,true,"));
}
