use std::path::PathBuf;
use std::process::{Command, Output};

fn dilab(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_dilab"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("DILAB_THREADS", t),
        None => cmd.env_remove("DILAB_THREADS"),
    };
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dilab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn growth_of_unit_k2() {
    let p = scratch("k2.json", r#"{"vertices":[{"id":"a","weight":1},{"id":"b","weight":1}],"edges":[["a","b"]]}"#);
    let o = dilab(&["growth", "--graph", p.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("growth rate: 1.000000"));
}

#[test]
fn curves_of_all_ones() {
    let p = scratch("ones.json", r#"{"matrix":[[1,1],[1,1]]}"#);
    let o = dilab(&["curves", "--matrix", p.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("3 curves"));
}

#[test]
fn fold_kind3_swaps_roles() {
    let p = scratch(
        "k3.json",
        r#"{"edges":[{"id":"a","role":"filament"},{"id":"b","role":"petal"}],"folds":[{"kind":3,"e0":"a","e1":"b"}]}"#,
    );
    let o = dilab(&["fold", "--script", p.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("| a | filament | petal | b |"), "{out}");
    assert!(out.contains("| b | petal | filament | a |"), "{out}");
}

#[test]
fn usage_and_format_errors_exit_2() {
    assert_eq!(dilab(&["verify-mcmullen", "--size", "9"], None).status.code(), Some(2));
    assert_eq!(dilab(&["delta"], None).status.code(), Some(2));
    assert_eq!(dilab(&["no-such-command"], None).status.code(), Some(2));
    let bad = scratch("bad.toml", "id = \"x\"\nanchor = \"y\"\nexpected_bound = [\n");
    let o = dilab(&["minimize", "--case", bad.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
    let bad = scratch("bad.json", "{\"matrix\": [[1, 2]]}");
    assert_eq!(dilab(&["curves", "--matrix", bad.to_str().unwrap()], None).status.code(), Some(2));
}

#[test]
fn case_file_round_trip() {
    let text = dilab::casework::builtin_case("V.both-non-petal").unwrap().to_toml();
    let p = scratch("v.toml", &text);
    let o = dilab(&["minimize", "--case", p.to_str().unwrap(), "--grid", "32"], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("- min: 16.000000"));
}

#[test]
fn output_independent_of_thread_count() {
    let args = ["--json", "minimize", "--builtin", "II.mu-filament-a", "--seed", "3"];
    let one = dilab(&args, Some("1"));
    let four = dilab(&args, Some("4"));
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    let args = ["--json", "verify-mcmullen", "--size", "5", "--trials", "20", "--seed", "9"];
    assert_eq!(dilab(&args, Some("1")).stdout, dilab(&args, Some("3")).stdout);
}
