use std::io::Write;
use std::process::{Command, Output, Stdio};

const C4: &str = "clutter 4\n1 2\n2 3\n3 4\n1 4\n";

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_clutterlab"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(args: &[&str], stdin: &str) -> String {
    let o = run(args, stdin);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

fn json(args: &[&str], stdin: &str) -> serde_json::Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    serde_json::from_str(&ok(&all, stdin)).unwrap()
}

#[test]
fn blocker_and_tau_of_c4() {
    assert_eq!(ok(&["blocker"], C4), "clutter 4\n2 4\n1 3\n");
    assert_eq!(ok(&["tau"], C4).trim(), "2");
    let b = json(&["blocker"], C4);
    assert_eq!(b["ground_size"], 4);
    assert_eq!(b["members"].as_array().unwrap().len(), 2);
}

#[test]
fn input_file_matches_stdin() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c4.txt");
    std::fs::write(&path, C4).unwrap();
    let from_file = ok(&["validate", "--input", path.to_str().unwrap()], "");
    assert_eq!(from_file, ok(&["validate"], C4));
}

#[test]
fn minor_prints_origin() {
    let out = ok(&["minor", "--delete", "1", "--contract", "3"], C4);
    assert_eq!(out, "# origin 2 4\nclutter 2\n2\n1\n");
}

#[test]
fn structure_commands_on_c4() {
    assert_eq!(ok(&["is-tangled"], C4).trim(), "tangled");
    assert_eq!(ok(&["is-clean"], C4).trim(), "clean");
    let graph = ok(&["graph"], C4);
    assert!(graph.starts_with("graph 4 components 2\n"));
    assert!(graph.contains("component 1 U 1 V 3"));
    assert_eq!(ok(&["setcore"], C4), "setsystem 2\n00\n01\n10\n11\n");
    assert_eq!(ok(&["core"], C4), ok(&["validate"], C4));
}

#[test]
fn delta_is_not_clean() {
    let delta = ok(&["generate", "--family", "delta:4"], "");
    let out = ok(&["is-clean", "--witness"], &delta);
    assert_eq!(out, "not-clean\ndelta 4 - -\n");
    let j = json(&["is-clean", "--witness"], &delta);
    assert_eq!(j["clean"], false);
}

#[test]
fn f6_parameters() {
    let f6 = ok(&["generate", "--family", "f6"], "");
    assert_eq!(ok(&["mu"], &f6), "3\n2,4,6\n");
    let lambda = ok(&["lambda"], &f6);
    assert_eq!(lambda.lines().next(), Some("3"));
    let setcore = ok(&["setcore"], &f6);
    assert_eq!(ok(&["lambda"], &setcore), lambda);
    let r = json(&["report"], &f6);
    for key in ["mu", "mu1", "mu2", "mu3", "lambda"] {
        assert_eq!(r[key], 3, "{key}");
    }
    assert_eq!(r["witnesses"]["rainbow_cover"], serde_json::json!([2, 4, 6]));
    let chain = ok(&["mu-chain"], &f6);
    assert_eq!(chain.lines().count(), 4);
}

#[test]
fn infinite_values_serialize_as_inf() {
    let r = json(&["report"], C4);
    assert_eq!(r["mu"], "inf");
    assert_eq!(r["witnesses"]["gsc"], serde_json::Value::Null);
}

#[test]
fn campaigns_exit_zero_without_violations() {
    let out = ok(&["verify-theorem", "--exhaustive", "--n", "4"], "");
    assert!(out.contains("violations 0"));
    let r = json(&["verify-lemmas", "--n", "6", "--count", "300", "--seed", "5"], "");
    assert_eq!(r["violations"], 0);
    assert_eq!(r["instances_total"], 300);
    let r = json(&["verify-lemmas", "--family", "odd-hole:5"], "");
    assert_eq!(r["obstructions_recognized"], 1);
}

#[test]
fn generate_is_reproducible() {
    let args = ["generate", "--n", "6", "--count", "5", "--seed", "9"];
    let a = ok(&args, "");
    assert_eq!(a, ok(&args, ""));
    assert_eq!(a.matches("clutter 6").count(), 5);
    assert_ne!(a, ok(&["generate", "--n", "6", "--count", "5", "--seed", "10"], ""));
}

#[test]
fn input_errors_exit_two() {
    let not_antichain = run(&["validate"], "clutter 3\n1 2\n1\n");
    assert_eq!(not_antichain.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&not_antichain.stderr).contains("line 3"));
    assert_eq!(run(&["tau"], "clutter 2\n1 3\n").status.code(), Some(2));
    assert_eq!(run(&["tau"], "").status.code(), Some(2));
    assert_eq!(run(&["minor", "--delete", "1", "--contract", "1"], C4).status.code(), Some(2));
    assert_eq!(run(&["verify-theorem", "--exhaustive", "--n", "7"], "").status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["no-such-command"], "").status.code(), Some(2));
    assert_eq!(run(&["tau", "--format", "xml"], C4).status.code(), Some(2));
    assert_eq!(run(&["generate", "--family", "pentagon"], "").status.code(), Some(2));
}
