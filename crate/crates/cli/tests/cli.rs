use std::path::Path;
use std::process::{Command, Output};

fn gramlaw(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gramlaw"));
    cmd.args(args).env_remove("GRAMLAW_CACHE_DIR");
    if let Some(dir) = cache {
        cmd.env("GRAMLAW_CACHE_DIR", dir);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// The printed table digits are truncated, not rounded.
fn matches_printed(v: f64, printed: f64) -> bool {
    let trunc = (v * 1e6).floor() / 1e6;
    let round = (v * 1e6).round() / 1e6;
    (trunc - printed).abs() < 1e-9 || (round - printed).abs() < 1e-9
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

#[test]
fn scalar_commands() {
    let o = gramlaw(&["gram-point", "-M", "0"], None);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("17.8455995"));
    let a: f64 = stdout(&gramlaw(&["alpha"], None)).trim().parse().unwrap();
    assert!((a - 0.987_944).abs() < 1e-6);
    let t: f64 = stdout(&gramlaw(&["theta", "-t", "7"], None)).trim().parse().unwrap();
    assert!((t + 3.5).abs() < 0.02);
    let c: f64 = stdout(&gramlaw(&["ci", "-x", "1"], None)).trim().parse().unwrap();
    assert!((c - 0.337_403_922_900_968).abs() < 1e-11);
    // twelve significant digits
    assert_eq!(stdout(&gramlaw(&["alpha"], None)).trim().len(), 14);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["theta"],
        vec!["theta", "-t", "abc"],
        vec!["frobnicate"],
        vec!["theta", "-t", "-3"],
        vec!["table", "T9"],
        vec!["table", "T4", "--samples", "1.5"],
        vec!["table", "T4", "--workers", "0"],
        vec!["verify", "all", "--n", "3"],
    ] {
        let o = gramlaw(&args, None);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn table2_matches_printed_rows() {
    let o = gramlaw(&["table", "T2", "--n-max", "21"], None);
    assert!(o.status.success());
    let rows = data_rows(&stdout(&o));
    assert_eq!(rows.len(), 20);
    let n21: Vec<f64> = rows[19][1..4].iter().map(|v| v.parse().unwrap()).collect();
    for (v, p) in n21.iter().zip([0.170_047, 0.661_752, 0.166_357]) {
        assert!((v - p).abs() < 1e-6);
    }
}

#[test]
fn table4_corollary_falls_back_beyond_fourier_limit() {
    let o = gramlaw(
        &["table", "T4", "--n-max", "8", "--method", "corollary", "--samples", "1e5", "--seed", "7"],
        None,
    );
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("# seed: 7"));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 7);
    assert_eq!(rows[0][7], "corollary");
    assert_eq!(rows[0][2], "1.000000000");
    assert_eq!(rows[4][7], "corollary");
    assert_eq!(rows[5][7], "monte-carlo");
    assert!(!rows[5][4].is_empty());
}

#[test]
fn monte_carlo_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t4.csv");
    let mut runs = Vec::new();
    for _ in 0..2 {
        let o = gramlaw(
            &["table", "T4", "--n-max", "5", "--samples", "2e4", "--seed", "11", "--workers", "3", "-o", path.to_str().unwrap()],
            None,
        );
        assert!(o.status.success());
        runs.push(std::fs::read(&path).unwrap());
    }
    let (x, y) = (runs[0].clone(), runs[1].clone());
    assert_eq!(x, y);
    assert!(String::from_utf8(x).unwrap().starts_with("# gramlaw "));
}

#[test]
fn json_output() {
    let o = gramlaw(&["table", "asymptotics", "--n-max", "5", "--format", "json"], None);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("\"id\": \"asymptotics\""));
    assert!(text.contains("\"runtime_secs\""));
}

#[test]
fn zero_cache_workflow() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");

    // nothing cached yet
    let o = gramlaw(&["table", "T1", "--m", "100"], Some(&cache));
    assert_eq!(o.status.code(), Some(3));

    let o = gramlaw(&["zeros", "find", "--to-gram", "2000"], Some(&cache));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let file = cache.join("zeros.txt");
    let first = std::fs::read(&file).unwrap();
    let text = String::from_utf8(first.clone()).unwrap();
    let z1: f64 = text.lines().find(|l| !l.starts_with('#')).unwrap().parse().unwrap();
    assert!((z1 - 14.134_725).abs() < 1e-6);

    // idempotent
    let o = gramlaw(&["zeros", "find", "--to-gram", "1500"], Some(&cache));
    assert!(o.status.success());
    assert_eq!(std::fs::read(&file).unwrap(), first);

    let o = gramlaw(&["table", "T1", "--m", "100,1000"], Some(&cache));
    assert!(o.status.success());
    let rows = data_rows(&stdout(&o));
    assert_eq!(rows[0][..6], ["100", "0", "100", "0", "0", "0"]);

    // T3 up to N = 6 needs g_6580
    let o = gramlaw(&["table", "T3", "--n-max", "6"], Some(&cache));
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("g_7..g_6580") && err.contains("zeros find"), "{err}");

    // extend, then the same table works
    let o = gramlaw(&["zeros", "find", "--to-gram", "6600"], Some(&cache));
    assert!(o.status.success());
    let o = gramlaw(&["table", "T3", "--n-max", "6"], Some(&cache));
    assert!(o.status.success());
    let rows = data_rows(&stdout(&o));
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[1][..2], ["3", "40"]);
    let g3: Vec<f64> = rows[1][2..5].iter().map(|v| v.parse().unwrap()).collect();
    for (v, p) in g3.iter().zip([0.016_129, 0.967_741, 0.016_129]) {
        assert!(matches_printed(*v, p), "{v} vs {p}");
    }
    let g6: Vec<f64> = rows[4][2..5].iter().map(|v| v.parse().unwrap()).collect();
    for (v, p) in g6.iter().zip([0.083_059, 0.834_538, 0.081_744]) {
        assert!(matches_printed(*v, p), "{v} vs {p}");
    }

    // --zeros overrides the cache
    let o = gramlaw(&["table", "T3", "--n-max", "3", "--zeros", file.to_str().unwrap()], None);
    assert!(o.status.success());
}

#[test]
fn ingest_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c");
    let src = dir.path().join("slice.txt");
    std::fs::write(&src, "# coverage 10 50\n14.134725141735\n21.022039638772\n25.010857580146\n30.424876125860\n32.935061587739\n37.586178158826\n40.918719012148\n43.327073280915\n48.005150881167\n49.773832477672\n").unwrap();
    let o = gramlaw(&["zeros", "ingest", src.to_str().unwrap()], Some(&cache));
    assert!(o.status.success());
    let before = std::fs::read(cache.join("zeros.txt")).unwrap();
    let o = gramlaw(&["zeros", "ingest", src.to_str().unwrap()], Some(&cache));
    assert!(o.status.success());
    assert_eq!(std::fs::read(cache.join("zeros.txt")).unwrap(), before);

    std::fs::write(&src, "14.1\nnot-a-number\n").unwrap();
    let o = gramlaw(&["zeros", "ingest", src.to_str().unwrap()], Some(&cache));
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn verify_suites() {
    let o = gramlaw(&["verify", "asymptotics", "--n", "50"], None);
    assert!(o.status.success());
    assert!(stdout(&o).contains("PASS"));
    let o = gramlaw(&["verify", "theorem1", "--n", "3"], None);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().filter(|l| l.ends_with("PASS")).count(), 5);
    let o = gramlaw(&["verify", "lemma1", "--n", "4", "--samples", "2e5", "--seed", "42"], None);
    assert!(o.status.success());
    assert!(stdout(&o).contains("sigma="));
}
