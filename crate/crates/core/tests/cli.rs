use std::process::Command;

use serde_json::Value;

fn ttolab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ttolab"))
}

fn write_problem(dir: &tempfile::TempDir, name: &str, body: &str) -> std::path::PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

const CLASSIFY: &str = r#"{"u":{"zeros":[[0,0],[0,0]]},
  "tasks":[{"kind":"classify","matrix":[[[0,0],[2,0]],[[1,0],[0,0]]]},
           {"kind":"clark","alpha":[1,0]}]}"#;

#[test]
fn json_report_and_exit_zero() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_problem(&dir, "p.json", CLASSIFY);
    let out = ttolab().arg("--input").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["exit_code"], 0);
    assert_eq!(v["tasks"][0]["result"]["type"], "alpha");
    let points = &v["tasks"][1]["result"]["points"];
    assert_eq!(points[0], serde_json::json!([1.0, 0.0]));
    assert_eq!(points[1], serde_json::json!([-1.0, 0.0]));
}

#[test]
fn output_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_problem(
        &dir,
        "v.json",
        r#"{"u":{"zeros":[[0.5,0],[0,-0.3]]},"tasks":[{"kind":"verify-all"}]}"#,
    );
    let run = || {
        ttolab()
            .args(["--seed", "7", "--trials", "3", "--input"])
            .arg(&path)
            .output()
            .unwrap()
    };
    let (a, b) = (run(), run());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn schema_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_problem(&dir, "bad.json", r#"{"u":{"zeros":[]},"tasks":[{"kind":"nonsense"}]}"#);
    let out = ttolab().arg("--input").arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());

    let outside = write_problem(&dir, "outside.json", r#"{"u":{"zeros":[[1.5,0]]},"tasks":[]}"#);
    let out = ttolab().arg("--input").arg(&outside).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let missing = dir.path().join("missing.json");
    let out = ttolab().arg("--input").arg(&missing).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn rejected_task_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_problem(
        &dir,
        "p.json",
        r#"{"u":{"zeros":[[0,0],[0,0]]},"tasks":[{"kind":"clark","alpha":[0.5,0]}]}"#,
    );
    let out = ttolab().arg("--input").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["tasks"][0]["status"], "rejected");
}

#[test]
fn output_field_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("report.json");
    let body = format!(
        r#"{{"u":{{"zeros":[[0,0]]}},"tasks":[{{"kind":"kernel_identities","lambda":[0.3,0.1]}}],"output":{}}}"#,
        serde_json::to_string(&target).unwrap()
    );
    let path = write_problem(&dir, "p.json", &body);
    let out = ttolab().arg("--input").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(v["tasks"][0]["status"], "ok");
}

#[test]
fn text_mode_from_stdin() {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = ttolab()
        .args(["--text", "--input", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(CLASSIFY.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("classify"));
}
