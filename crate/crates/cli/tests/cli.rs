//! End-to-end exercises of the binary: exit codes, the generator grammar,
//! and re-parsability of emitted JSON.

use std::io::Write;
use std::process::{Command, Output};

use torq_core::simplicial::SimplicialComplex;
use torq_core::torus::SubtorusSpec;

fn torq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torq")).args(args).output().unwrap()
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout must be valid JSON")
}

#[test]
fn check_exit_codes() {
    let free = torq(&["check", "--complex", "polygon:5", "--subtorus", "diagonal"]);
    assert_eq!(free.status.code(), Some(0));

    let fixed = torq(&["check", "--complex", "simplex:2", "--subtorus", "diagonal"]);
    assert_eq!(fixed.status.code(), Some(2));
    let text = String::from_utf8_lossy(&fixed.stdout);
    assert!(text.contains("[1, 2]"), "the top facet must be named: {text}");

    let bad = tempfile_with(b"{\"m\": 2, \"facets\": [[1,");
    let path = bad.path().to_str().unwrap().to_string();
    let broken = torq(&["check", "--complex", &path]);
    assert_eq!(broken.status.code(), Some(1));
}

#[test]
fn betti_hopf_and_hochster_match_spec() {
    let hopf = torq(&[
        "betti", "--complex", "simplex-boundary:2", "--subtorus", "diagonal", "--ring", "Z",
        "--format", "json",
    ]);
    assert_eq!(hopf.status.code(), Some(0));
    let doc = stdout_json(&hopf);
    let betti: Vec<u64> = doc["degrees"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| d["betti"].as_u64().unwrap())
        .collect();
    assert_eq!(betti, vec![1, 0, 1]); // CP¹

    let sphere = torq(&[
        "betti", "--complex", "simplex-boundary:2", "--ring", "Z", "--format", "json",
    ]);
    let doc = stdout_json(&sphere);
    let betti: Vec<u64> = doc["degrees"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| d["betti"].as_u64().unwrap())
        .collect();
    assert_eq!(betti, vec![1, 0, 0, 1]); // S³
}

#[test]
fn betti_refuses_non_free_actions() {
    let out = torq(&["betti", "--complex", "simplex:3", "--subtorus", "diagonal"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn ring_policy_over_z() {
    let out = torq(&[
        "ring", "--complex", "simplex-boundary:2", "--subtorus", "diagonal", "--ring", "Z",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("field"), "refusal must explain the field-only policy: {err}");
}

#[test]
fn oracle_exit_codes() {
    let agree = torq(&["oracle", "--complex", "polygon:6", "--ring", "Q"]);
    assert_eq!(agree.status.code(), Some(0));

    let no_oracle =
        torq(&["oracle", "--complex", "simplex-boundary:2", "--subtorus", "diagonal"]);
    assert_eq!(no_oracle.status.code(), Some(3));
}

#[test]
fn pentagon_betti_matches_oracle_command() {
    // `betti` and the Hochster side of `oracle` must tell the same story
    let betti = torq(&["betti", "--complex", "polygon:5", "--ring", "Q", "--format", "json"]);
    let doc = stdout_json(&betti);
    let betti: Vec<u64> = doc["degrees"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| d["betti"].as_u64().unwrap())
        .collect();
    assert_eq!(betti, vec![1, 0, 0, 5, 5, 0, 0, 1]);

    let oracle = torq(&["oracle", "--complex", "polygon:5", "--ring", "Q", "--format", "json"]);
    assert_eq!(oracle.status.code(), Some(0));
    let doc = stdout_json(&oracle);
    for row in doc["rows"].as_array().unwrap() {
        assert_eq!(row["matched"], serde_json::Value::Bool(true));
    }
}

#[test]
fn emitted_json_reparses_under_the_documented_schemas() {
    let out = torq(&[
        "betti", "--complex", "join:polygon:4+simplex-boundary:2", "--subtorus", "diagonal",
        "--ring", "Q", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    let complex = SimplicialComplex::from_json(&doc["params"]["complex"]).unwrap();
    assert_eq!(complex.m(), 6);
    let subtorus = SubtorusSpec::from_json(&doc["params"]["subtorus"]).unwrap();
    assert_eq!(subtorus.k(), 1);
    assert_eq!(doc["params"]["ring"], "Q");
}

#[test]
fn generator_grammar() {
    // skeleton of a boundary sphere: 4 isolated points
    let out = torq(&[
        "betti", "--complex", "skeleton:0:of:simplex-boundary:4", "--ring", "Z", "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    let facets = doc["params"]["complex"]["facets"].as_array().unwrap();
    assert_eq!(facets.len(), 4);
    assert!(facets.iter().all(|f| f.as_array().unwrap().len() == 1));

    let bad = torq(&["betti", "--complex", "polygon:two"]);
    assert_eq!(bad.status.code(), Some(1));
    let bad = torq(&["betti", "--complex", "polygon:2"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn subtorus_from_file() {
    let file = tempfile_with(br#"{"m": 3, "basis": [[1, 1, 1]]}"#);
    let path = file.path().to_str().unwrap().to_string();
    let out = torq(&[
        "betti", "--complex", "simplex-boundary:3", "--subtorus", &path, "--ring", "Q",
        "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    let betti: Vec<u64> = doc["degrees"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| d["betti"].as_u64().unwrap())
        .collect();
    assert_eq!(betti, vec![1, 0, 1, 0, 1]); // CP²

    let mismatched = torq(&["betti", "--complex", "polygon:4", "--subtorus", &path]);
    assert_eq!(mismatched.status.code(), Some(1));
}

// minimal scoped temp file helper
struct TempFile {
    path: std::path::PathBuf,
    file: std::fs::File,
}

impl TempFile {
    fn path(&self) -> &std::path::Path {
        &self.path
    }
}

impl Write for TempFile {
    fn write(&mut self, buf: &[u8]) -> std::io::Result<usize> {
        self.file.write(buf)
    }
    fn flush(&mut self) -> std::io::Result<()> {
        self.file.flush()
    }
}

impl Drop for TempFile {
    fn drop(&mut self) {
        let _ = std::fs::remove_file(&self.path);
    }
}

fn tempfile_with(content: &[u8]) -> TempFile {
    use std::sync::atomic::{AtomicU64, Ordering};
    static COUNTER: AtomicU64 = AtomicU64::new(0);
    let unique = COUNTER.fetch_add(1, Ordering::SeqCst);
    let path = std::env::temp_dir().join(format!(
        "torq-cli-test-{}-{unique}.json",
        std::process::id()
    ));
    let mut file = std::fs::File::create(&path).unwrap();
    file.write_all(content).unwrap();
    file.flush().unwrap();
    TempFile { path, file }
}
