use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

use devlab::syntax::{from_json, parse};

fn devlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_devlab"))
        .args(args)
        .env_remove("DEVLAB_STATE_LIMIT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn machine(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--machine"];
    all.extend_from_slice(args);
    let o = devlab(&all);
    let doc = serde_json::from_str(&stdout(&o)).expect("one JSON document");
    (o.status.code().unwrap(), doc)
}

const DUP: &str = "(\\*x. x x) ((\\*y. y) w)";
const ERASE: &str = "(\\*x. z) ((\\*y. y) w)";

#[test]
fn metrics_command() {
    let o = devlab(&["metrics", DUP]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("h=2 g=3"));

    let (code, doc) = machine(&["metrics", "--var", "x", "x x"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["m"], 2);
    assert_eq!(doc["result"]["n"], 2);
    assert_eq!(from_json(&doc["term"]).unwrap(), parse("x x").unwrap());
}

#[test]
fn trace_command() {
    let o = devlab(&["trace", ERASE]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0));
    assert!(out.contains("step 1: root -> z"), "{out}");
    assert!(out.contains("length=1 h=1 check=ok"), "{out}");

    let (code, doc) = machine(&["trace", "--mode", "longest", ERASE]);
    assert_eq!(code, 0);
    let steps = doc["result"]["steps"].as_array().unwrap();
    assert_eq!(steps.len(), 2);
    assert_eq!(steps[0]["path"], serde_json::json!(["RedArg"]));
    assert_eq!(steps[0]["text"], "(\\*x. z) w");
    assert_eq!(from_json(&steps[1]["term"]).unwrap(), parse("z").unwrap());

    let (_, doc) = machine(&["trace", "z"]);
    assert_eq!(doc["result"]["length"], 0);
}

#[test]
fn essential_command() {
    let out = stdout(&devlab(&["essential", ERASE]));
    assert!(
        out.contains("essential=[root] count=1 h=1 check=ok"),
        "{out}"
    );
    let out = stdout(&devlab(&["essential", DUP]));
    assert!(
        out.contains("essential=[root, arg] count=2 h=2 check=ok"),
        "{out}"
    );
    let out = stdout(&devlab(&["essential", "z"]));
    assert!(out.contains("essential=[] count=0"), "{out}");
}

#[test]
fn oracle_command() {
    let o = devlab(&["oracle", DUP]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("shortest=2 longest=3"), "{out}");
    assert!(out.contains("agree=yes"), "{out}");

    let (code, doc) = machine(&["oracle", "z"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["shortest"], 0);
    assert_eq!(doc["result"]["longest"], 0);

    // Nested duplication blows up the state space.
    let deep =
        "(\\*a. a a a) ((\\*b. b b b) ((\\*c. c c c) ((\\*d. d d d) ((\\*e. e e) ((\\*f. f) w)))))";
    let (code, doc) = machine(&["oracle", "--state-limit", "50", deep]);
    assert_eq!(code, 4);
    assert_eq!(doc["result"]["complete"], false);
    assert_eq!(doc["diagnostics"]["limit_exceeded"], true);
}

#[test]
fn state_limit_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_devlab"))
        .args(["oracle", DUP])
        .env("DEVLAB_STATE_LIMIT", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn parse_errors_exit_2() {
    let o = devlab(&["metrics", "(\\*x. x)"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("marked lambda must be applied"));
    let (code, doc) = machine(&["trace", "(x"]);
    assert_eq!(code, 2);
    assert!(doc["result"]["error"]
        .as_str()
        .unwrap()
        .contains("unbalanced"));
}

#[test]
fn batch_file() {
    let dir = std::env::temp_dir().join(format!("devlab-batch-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("terms.txt");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(f, "{ERASE}\n\n{DUP}\nx").unwrap();
    drop(f);
    let p = path.to_str().unwrap();

    let o = devlab(&["metrics", "-f", p]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.matches("h=").count(), 3, "{out}");

    let (code, doc) = machine(&["essential", "-f", p]);
    assert_eq!(code, 0);
    assert_eq!(doc.as_array().unwrap().len(), 3);

    std::fs::write(&path, "x\n(y\n").unwrap();
    assert_eq!(devlab(&["metrics", "-f", p]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn check_command() {
    let (code, doc) = machine(&["check", "--count", "0"]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["terms"], 0);
    assert_eq!(doc["result"]["failed"], 0);

    let run = || {
        let (code, mut doc) = machine(&["check", "--count", "100", "--seed", "42"]);
        doc["diagnostics"]["elapsed_ms"] = Value::Null;
        (code, doc)
    };
    let (code, first) = run();
    assert_eq!(code, 0);
    assert_eq!(first["result"]["terms"], 100);
    assert_eq!(first, run().1);

    let o = devlab(&["check", "--count", "20", "--max-size", "0"]);
    assert_eq!(o.status.code(), Some(2));
}
