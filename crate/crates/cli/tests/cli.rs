use std::path::PathBuf;
use std::process::{Command, Output};

fn heckeavg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heckeavg"))
        .args(args)
        .env_remove("HECKEAVG_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = heckeavg(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn golden() -> String {
    std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../testdata/table1.csv")).unwrap()
}

#[test]
fn classify_matches_golden_table_across_thread_counts() {
    let out = heckeavg(&["classify", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden());
    let progress = String::from_utf8(out.stderr).unwrap();
    assert!(progress.contains("levels below 150000 of 150000 done"));

    let dir = scratch("classify");
    let file = dir.join("table.csv");
    let cert = dir.join("cert.json");
    let out = heckeavg(&[
        "classify",
        "--format",
        "csv",
        "--threads",
        "1",
        "--out",
        file.to_str().unwrap(),
        "--certificate",
        cert.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&file).unwrap(), golden());
    let cert: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(cert["levels_searched"], 75_000);
    assert_eq!(cert["tail"]["holds"], true);
}

#[test]
fn classify_json_carries_radical_parts() {
    let v: serde_json::Value = serde_json::from_str(&stdout(&["classify", "--format", "json"])).unwrap();
    let pairs = v["pairs"].as_array().unwrap();
    assert_eq!(pairs.len(), 26);
    let p = pairs.iter().find(|p| p["N"] == 1 && p["k"] == 46).unwrap();
    assert_eq!(p["av"]["num"], "3");
    assert_eq!(p["av"]["den"], "65536");
    assert_eq!(p["av"]["radicand"], "468559893");
}

#[test]
fn trace_examples() {
    let human = stdout(&["trace", "-N", "1", "-k", "12", "-m", "4"]);
    assert!(human.contains("= -1472"));
    assert!(human.contains("-23/32"));
    assert_eq!(
        stdout(&["trace", "-N", "37", "-k", "2", "-m", "4", "--format", "csv"]),
        "N,k,m,trace,normalized\n37,2,4,0,0\n"
    );
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&["trace", "-N", "11", "-k", "2", "-m", "2", "--format", "json"])).unwrap();
    assert_eq!(v["trace"], "-2");
    assert!(v["normalized"].is_null());
}

#[test]
fn non_coprime_input_fails_with_diagnostic() {
    let out = heckeavg(&["trace", "-N", "4", "-k", "12", "-m", "2"]);
    assert!(!out.status.success());
    assert!(out.stdout.is_empty());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("coprime"), "{err}");
}

#[test]
fn av_renders_exact_radicals() {
    let human = stdout(&["av", "-N", "1", "-k", "20", "-m", "2"]);
    assert!(human.contains("(57/128)·sqrt(2)"), "{human}");
    let csv = stdout(&["av", "-N", "1", "-k", "20", "-m", "2", "--format", "csv"]);
    assert_eq!(csv.lines().nth(1).unwrap(), "1,20,2,3249/8192,57/128*sqrt(2),0.6297669770");
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&["av", "-N", "57", "-k", "2", "-m", "2", "--format", "json"])).unwrap();
    assert_eq!((v["av"]["num"].as_str(), v["av"]["den"].as_str(), v["av"]["radicand"].as_str()), (Some("3"), Some("10"), Some("10")));
    assert!(!heckeavg(&["av", "-N", "1", "-k", "2", "-m", "2"]).status.success());
}

#[test]
fn measures_second_moments() {
    let csv = stdout(&["measures", "--r", "2", "--format", "csv"]);
    let get = |name: &str| -> f64 {
        let line = csv.lines().find(|l| l.starts_with(&format!("{name},"))).unwrap();
        line.rsplit(',').next().unwrap().parse().unwrap()
    };
    assert!((get("serre(2)") - 1.5).abs() < 1e-8);
    assert!((get("sato_tate") - 1.0).abs() < 1e-8);
    assert!((get("cm") - 1.0).abs() < 1e-8);
    let cmp = stdout(&["measures", "--compare", "--format", "csv"]);
    let agreeing: Vec<_> = cmp.lines().skip(1).filter(|l| l.ends_with(",true")).collect();
    assert_eq!(agreeing.len(), 1);
    assert!(agreeing[0].starts_with("2,"));
    assert!(!heckeavg(&["measures", "--primes", "4"]).status.success());
}

#[test]
fn coefficient_files_feed_horizontal_commands() {
    let dir = scratch("forms");
    let file = dir.join("delta.txt");
    stdout(&["tau", "-x", "5000", "--out", file.to_str().unwrap()]);
    let text = std::fs::read_to_string(&file).unwrap();
    assert!(text.starts_with("# Delta weight=12\n1\t1\n2\t-24\n"));

    let from_file = stdout(&["scan", "--file", file.to_str().unwrap(), "-x", "5000", "--format", "csv"]);
    let built_in = stdout(&["scan", "-x", "5000", "--format", "csv"]);
    assert_eq!(from_file, built_in);

    let no_norm = heckeavg(&["horizontal", "--file", file.to_str().unwrap(), "--checkpoints", "100"]);
    assert!(!no_norm.status.success());
    let with_norm = stdout(&[
        "horizontal",
        "--file",
        file.to_str().unwrap(),
        "--norm",
        "0.001017527",
        "--checkpoints",
        "1,100,5000",
        "--format",
        "csv",
    ]);
    let default = stdout(&["horizontal", "--checkpoints", "1,100,5000", "--format", "csv"]);
    assert_eq!(with_norm, default);
    assert!(default.lines().nth(1).unwrap().starts_with("1,1.000000000000,0.6197448"));

    let plot = stdout(&["horizontal", "--checkpoints", "10,100", "--gnuplot"]);
    assert!(plot.starts_with("# Delta"));
    assert_eq!(plot.lines().filter(|l| !l.starts_with('#')).count(), 2);
}

#[test]
fn trace_cache_persists_and_env_override_is_honoured() {
    let dir = scratch("cache");
    let first = stdout(&["trace", "-N", "5", "-k", "10", "-m", "9", "--cache-dir", dir.to_str().unwrap()]);
    let file = dir.join("traces.bin");
    let size = std::fs::metadata(&file).unwrap().len();
    assert!(size > 0);

    let out = Command::new(env!("CARGO_BIN_EXE_heckeavg"))
        .args(["trace", "-N", "5", "-k", "10", "-m", "9"])
        .env("HECKEAVG_CACHE_DIR", &dir)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), first);

    // A planted value is served under the current formula version...
    let mut bytes = std::fs::read(&file).unwrap();
    let last = bytes.len() - 1;
    bytes[last] ^= 1;
    std::fs::write(&file, &bytes).unwrap();
    let planted = stdout(&["trace", "-N", "5", "-k", "10", "-m", "9", "--cache-dir", dir.to_str().unwrap()]);
    assert_ne!(planted, first);

    // ...and ignored once the version string differs.
    let len = u32::from_le_bytes(bytes[12..16].try_into().unwrap()) as usize;
    bytes[16 + len - 1] ^= 1;
    std::fs::write(&file, &bytes).unwrap();
    let again = stdout(&["trace", "-N", "5", "-k", "10", "-m", "9", "--cache-dir", dir.to_str().unwrap()]);
    assert_eq!(again, first);
}

#[test]
fn rejects_zero_threads() {
    assert!(!heckeavg(&["--threads", "0", "tau"]).status.success());
}
