use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn billiard(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_billiard")).args(args).env_remove("BILLIARD_SEED").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn bound_exit_status_follows_certification() {
    let o = billiard(&["bound", "--stadium", "1.8", "1.0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("certified: h ≥ log 2"));
    let o = billiard(&["bound", "--stadium", "1.732", "1.0"]);
    assert_eq!(o.status.code(), Some(3));
    let o = billiard(&["bound", "--mushroom", "0.87", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("certified: h ≥ ½ log 2"));
}

#[test]
fn realize_writes_csv_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = billiard(&["realize", "--stadium", "4.0", "1.0", "--out", out, "--", "0", "1", "0"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("re-encoded: 0 1 0\n"));
    let csv = std::fs::read_to_string(dir.path().join("orbit.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("step,arc_id,r,phi,x,y"));
    let arcs: Vec<&str> = lines.map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(arcs, ["left", "bottom", "right"]);
    let svg = std::fs::read_to_string(dir.path().join("orbit.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("<polyline"));
    // nothing but the two outputs is left behind
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2);
}

#[test]
fn realize_failures_map_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = billiard(&["realize", "--stadium", "4.0", "1.0", "--out", out, "--", "0", "1", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = billiard(&["realize", "--stadium", "4.0", "1.0", "--out", out, "--", "0", "1", "2", "0"]);
    assert_eq!(o.status.code(), Some(4));
    let o = billiard(&["realize", "--stadium", "4.0", "1.0", "--out", out, "--", "0", "x"]);
    assert_eq!(o.status.code(), Some(2));
    // failures write no files
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn long_itineraries_stall_with_exit_5() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let mut args = vec!["realize", "--stadium", "4.0", "1.0", "--out", out, "--"];
    let word = ["0", "1"].repeat(20);
    args.extend(word.iter().copied());
    let o = billiard(&args);
    assert_eq!(o.status.code(), Some(5), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bisection"));
}

#[test]
fn verify_reports_pass_and_fail() {
    let o = billiard(&["verify", "--config", fixture("stadium.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.matches("result: pass").count(), 2);
    assert!(text.contains("rigorous: false"));
    let o = billiard(&["verify", "--config", fixture("flat_full.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let text = stdout(&o);
    assert!(text.contains("cap: left") && text.contains("result: fail") && text.contains("p+: none"));
    assert!(text.contains("markers"));
}

#[test]
fn count_csv() {
    let o = billiard(&["count", "--n", "1", "--n-max", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<Vec<&str>> = text.lines().map(|l| l.split(',').collect()).collect();
    assert_eq!(rows[0], ["n", "a_n", "rate"]);
    assert_eq!((rows[1][1], rows[2][1], rows[3][1]), ("3", "5", "11"));
    let half = billiard(&["count", "--n", "1", "--n-max", "3", "--semistadium"]);
    let full_rate: f64 = rows[3][2].parse().unwrap();
    let half_rate: f64 = stdout(&half).lines().nth(3).unwrap().split(',').nth(2).unwrap().parse().unwrap();
    assert!((half_rate - 0.5 * full_rate).abs() < 1e-11);
}

#[test]
fn simulate_is_seeded() {
    let run = |seed: &str| {
        let dir = tempfile::tempdir().unwrap();
        let o = Command::new(env!("CARGO_BIN_EXE_billiard"))
            .args(["simulate", "--stadium", "2", "1", "--steps", "10", "--out", dir.path().to_str().unwrap()])
            .env("BILLIARD_SEED", seed)
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0));
        (stdout(&o), std::fs::read_to_string(dir.path().join("orbit.csv")).unwrap())
    };
    assert_eq!(run("17"), run("17"));
    assert_ne!(run("17").1, run("18").1);
}

#[test]
fn simulate_from_given_start() {
    let dir = tempfile::tempdir().unwrap();
    let o = billiard(&[
        "simulate",
        "--stadium",
        "4",
        "1",
        "--steps",
        "3",
        "--arc",
        "left",
        "--r",
        "0.2617993877991494",
        "--phi",
        "0",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("orbit.csv")).unwrap();
    let arcs: Vec<&str> = csv.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(arcs, ["left", "right", "left", "right"]);
}

#[test]
fn bad_input_exits_2() {
    assert_eq!(billiard(&["bound", "--stadium", "4", "1", "--eps", "0.6"]).status.code(), Some(2));
    assert_eq!(billiard(&["bound", "--config", "/nonexistent.toml"]).status.code(), Some(2));
    assert_eq!(billiard(&["bound", "--mushroom", "1", "0.1"]).status.code(), Some(2));
    assert_eq!(billiard(&["simulate", "--stadium", "4", "1", "--arc", "left"]).status.code(), Some(2));
}
