use std::io::Write;
use std::process::{Command, Output};

fn cdiff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cdiff")).args(args).env_remove("CDIFF_THREADS").output().expect("spawn cdiff")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn gold_summary_over_all_c() {
    let o = cdiff(&["ddt", "--field", "2^3", "--gold", "1", "--perturb", "bin:0,1", "--c", "all", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("c,uniformity"));
    let us: Vec<u32> = lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(us.len(), 7);
    assert_eq!(us.iter().max(), Some(&3));
}

#[test]
fn identity_table_is_all_ones() {
    let o = cdiff(&["ddt", "--field", "2^2", "--fn", "identity", "--c", "2"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 16);
    assert!(rows.iter().all(|r| r.ends_with(",1")));
}

#[test]
fn three_routes_agree() {
    let o = cdiff(&["ddt", "--field", "3^2", "--gold", "1", "--c", "2", "--method", "verify"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "char=brute=closed on 81 entries");
}

#[test]
fn json_and_markdown_outputs() {
    let o = cdiff(&["ddt", "--field", "2^3", "--fn", "power:3", "--c", "0", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let js: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(js["q"], 8);
    let rows = js["counts"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|r| r.as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).sum::<u64>() == 8));
    let o = cdiff(&["ddt", "--field", "2^2", "--fn", "identity", "--c", "0", "--format", "md"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with('|'));
}

#[test]
fn admissible_only_drops_a_zero_at_c_one() {
    let o = cdiff(&["ddt", "--field", "2^2", "--fn", "power:3", "--c", "1", "--admissible-only"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 1 + 12);
    assert!(!text.lines().skip(1).any(|l| l.starts_with("0,")));
}

#[test]
fn exit_codes() {
    assert_eq!(code(&cdiff(&["ddt", "--field", "2^3", "--fn", "identity", "--method", "closed"])), 1);
    assert_eq!(code(&cdiff(&["ddt", "--field", "4^2", "--fn", "identity"])), 1);
    assert_eq!(code(&cdiff(&["ddt", "--field", "2^3", "--gold", "1", "--fn", "identity"])), 1);
    assert_eq!(code(&cdiff(&["ddt", "--field", "2^3", "--fn", "identity", "--tol", "0"])), 1);
    assert_eq!(code(&cdiff(&["--bogus"])), 1);
    assert_eq!(code(&cdiff(&["--help"])), 0);
    let o = cdiff(&["verify", "--suite", "entries", "--field", "3^2", "--inject-fault", "t1-factor"]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("counterexample"));
    // a tolerance too tight for floating-point round-off
    let o = cdiff(&["ddt", "--field", "3^3", "--gold", "1", "--c", "2", "--method", "char", "--tol", "1e-30"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn bluher_count_for_3_4() {
    let o = cdiff(&["verify", "--suite", "bluher", "--field", "3^4", "--k", "1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("count 3"), "{}", stdout(&o));
}

#[test]
fn verify_json_report() {
    let o = cdiff(&["verify", "--suite", "discrepancies", "--json"]);
    assert_eq!(code(&o), 0);
    let js: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(js["passed"], true);
    assert_eq!(js["suites"][0]["name"], "discrepancies");
}

#[test]
fn tables_diff_small_degrees() {
    let o = cdiff(&["tables", "--n", "3,4", "--diff"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("0 mismatching cells"));
    let o = cdiff(&["tables", "--n", "4", "--format", "csv"]);
    assert!(stdout(&o).lines().any(|l| l == "4,0,3,1,6"));
}

#[test]
fn config_file_mirrors_flags() {
    let dir = std::env::temp_dir().join(format!("cdiff-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("run.cfg");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, "# GF(8) Gold perturbation\nfield=2^3\ngold=1\nperturb=bin:0,1\nformat=csv").unwrap();
    let p = path.to_str().unwrap();
    let from_file = cdiff(&["--config", p, "ddt"]);
    let direct = cdiff(&["ddt", "--field", "2^3", "--gold", "1", "--perturb", "bin:0,1", "--format", "csv"]);
    assert_eq!(code(&from_file), 0);
    assert_eq!(from_file.stdout, direct.stdout);
    // command-line flags win over the file
    let o = cdiff(&["--config", p, "ddt", "--c", "3"]);
    assert_eq!(stdout(&o).lines().count(), 65);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn output_is_independent_of_thread_count() {
    let args = ["ddt", "--field", "2^4", "--gold", "1", "--perturb", "bin:0,3", "--method", "char", "--format", "json"];
    let one = cdiff(&[&["--threads", "1"], &args[..]].concat());
    let many = cdiff(&[&["--threads", "4"], &args[..]].concat());
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, many.stdout);
    let env = Command::new(env!("CARGO_BIN_EXE_cdiff")).args(args).env("CDIFF_THREADS", "3").output().unwrap();
    assert_eq!(env.stdout, one.stdout);
}
