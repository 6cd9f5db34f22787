use std::process::{Command, Output};

const A2: &str = "[[0,1],[-1,0]]";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_seedpattern")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn golden(name: &str) -> String {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

#[test]
fn tables_match_golden_files() {
    let text = run(&["tables-a2"]);
    assert!(text.status.success());
    assert_eq!(stdout(&text), golden("tables-a2.txt"));
    let json = run(&["tables-a2", "--format", "json"]);
    assert_eq!(stdout(&json), golden("tables-a2.json"));
}

#[test]
fn single_table_is_a_slice_of_the_full_json() {
    let all: serde_json::Value = serde_json::from_str(&golden("tables-a2.json")).unwrap();
    let one = run(&["tables-a2", "--table", "root-matrices", "--format", "json"]);
    let one: serde_json::Value = serde_json::from_str(&stdout(&one)).unwrap();
    assert_eq!(one, all["root_matrices"]);
}

#[test]
fn mutate_matches_golden_file() {
    let o = run(&["mutate", "--matrix", A2, "--walk", "2,1", "--semifield", "tropical", "--format", "json"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), golden("mutate-a2-2-1.json"));
}

#[test]
fn matrix_can_come_from_a_file() {
    let path = std::env::temp_dir().join(format!("seedpattern-b2-{}.json", std::process::id()));
    std::fs::write(&path, "[[0,1],[-2,0]]").unwrap();
    let from_file = run(&["mutate", "--matrix", path.to_str().unwrap(), "--walk", "1,2,1", "--format", "json"]);
    let inline = run(&["mutate", "--matrix", "[[0,1],[-2,0]]", "--walk", "1,2,1", "--format", "json"]);
    std::fs::remove_file(&path).ok();
    assert!(from_file.status.success());
    assert_eq!(stdout(&from_file), stdout(&inline));
}

#[test]
fn a2_dualities_hold_up_to_length_five() {
    let o = run(&["check-duality", "--matrix", A2, "--max-len", "5", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["walks"], 63);
    assert!(v["failures"].as_array().unwrap().is_empty());
}

#[test]
fn extension_blocks_hold() {
    let o = run(&["extend", "--matrix", "[[0,2,0],[-1,0,1],[0,-1,0]]", "--walk", "1,2,3,1", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["symmetrizer"], serde_json::json!(["1", "2", "2", "1", "2", "2"]));
    assert!(v["blocks"].as_object().unwrap().iter().filter(|(k, _)| *k != "walk").all(|(_, ok)| ok == true));
}

#[test]
fn random_suite_is_deterministic() {
    let args = ["random-suite", "--cases", "15", "--long-cases", "3", "--seed", "11", "--format", "json"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["mutate", "--matrix", "[[0,1],[1,0]]"]).status.code(), Some(2));
    assert_eq!(run(&["mutate", "--matrix", A2, "--walk", "3"]).status.code(), Some(2));
    assert_eq!(run(&["mutate", "--matrix", "[[0,1]"]).status.code(), Some(2));
    assert_eq!(run(&["tables-a2", "--table", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["random-suite", "--groups", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let bad_env = Command::new(env!("CARGO_BIN_EXE_seedpattern"))
        .args(["tables-a2"])
        .env("SEEDPATTERN_MAX_TERMS", "lots")
        .output()
        .unwrap();
    assert_eq!(bad_env.status.code(), Some(2));
}

#[test]
fn term_ceiling_is_a_runtime_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_seedpattern"))
        .args(["mutate", "--matrix", "[[0,2],[-2,0]]", "--walk", "1,2,1,2,1,2"])
        .env("SEEDPATTERN_MAX_TERMS", "3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn repeated_labels_warn() {
    let o = run(&["mutate", "--matrix", A2, "--walk", "1,1"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}
