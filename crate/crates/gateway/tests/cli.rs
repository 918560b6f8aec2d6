use std::io::{Read, Write};
use std::net::{TcpListener, TcpStream};
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};
use std::time::{Duration, Instant};

fn t4f() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_t4f"));
    c.env_remove("T4F_DATA_DIR");
    c
}

fn run(args: &[&str]) -> Output {
    t4f().args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// Writes a synthetic corpus and ingests it into a normalized snapshot.
fn synthetic_snapshot(dir: &Path, spec: &str) -> PathBuf {
    let jsonl = dir.join("s.jsonl");
    let snap = dir.join("s.t4f");
    let out = run(&["synth", "--spec", spec, "--seed", "7", "--out", p(&jsonl)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let out = run(&["ingest", "--input", p(&jsonl), "--out", p(&snap), "--normalize"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    snap
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(code(&run(&["task", "locale", "--level", "city"])), 1);
    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(code(&run(&["synth", "--out", "x.jsonl", "--bogus"])), 1);
    assert_eq!(code(&run(&["task", "locale", "--level", "galaxy", "--snapshot", "x"])), 1);
    assert_eq!(code(&run(&[])), 1);
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.jsonl");
    assert_eq!(code(&run(&["synth", "--spec", "nope", "--out", p(&out)])), 1);
    assert_eq!(code(&run(&["synth", "--marker-rate", "1.5", "--out", p(&out)])), 1);
}

#[test]
fn help_exits_0() {
    let out = run(&["--help"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    for sub in ["ingest", "normalize", "synth", "lda", "task", "curve", "rank-terms", "serve"] {
        assert!(text.contains(sub), "{sub}");
    }
}

#[test]
fn data_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.t4f");
    assert_eq!(code(&run(&["rank-terms", "--snapshot", p(&missing)])), 2);
    let garbage = dir.path().join("garbage.t4f");
    std::fs::write(&garbage, b"not a snapshot").unwrap();
    assert_eq!(code(&run(&["task", "locale", "--level", "state", "--snapshot", p(&garbage)])), 2);
    let out = t4f()
        .args(["rank-terms", "--snapshot", p(&garbage)])
        .env("T4F_DATA_DIR", dir.path().join("no-such-dir"))
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn synth_writes_file_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("s.jsonl");
    let out = run(&["synth", "--spec", "default", "--seed", "7", "--out", p(&out_path)]);
    assert_eq!(code(&out), 0);
    let manifest_path = dir.path().join("s.jsonl.manifest.json");
    assert!(out_path.exists() && manifest_path.exists());
    let manifest: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&manifest_path).unwrap()).unwrap();
    assert_eq!(manifest["counts"]["matching_count"], 51_000);
    assert_eq!(manifest["locales"].as_array().unwrap().len(), 51);
}

#[test]
fn state_chars_with_lda_on_synthetic_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    let snap = synthetic_snapshot(dir.path(), "default");
    let result_path = dir.path().join("run.json");
    let out = run(&[
        "task", "state-chars", "--dataset", "diabetes", "--features", "all_words", "--lda",
        "--snapshot", p(&snap), "--topics", "20", "--lda-iterations", "30", "--bootstrap", "1000",
        "--out", p(&result_path),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&result_path).unwrap()).unwrap();
    assert!(v["accuracy"].as_f64().unwrap() >= 0.9, "{}", v["accuracy"]);
    assert_eq!(v["task"], "state-chars/diabetes");
    assert_eq!(v["per_instance"].as_array().unwrap().len(), 51);
    assert!(v["config"]["use_lda"].as_bool().unwrap());
    let names: Vec<&str> = v["top_features"]["above"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["name"].as_str().unwrap())
        .collect();
    assert!(!names.is_empty());
}

#[test]
fn pipeline_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let snap = synthetic_snapshot(dir.path(), "small");
    let d = dir.path();

    let renorm = d.join("n.t4f");
    assert_eq!(code(&run(&["normalize", "--snapshot", p(&snap), "--out", p(&renorm)])), 0);

    let model = d.join("m.lda");
    let out = run(&["lda", "--snapshot", p(&snap), "--out", p(&model), "--topics", "5", "--iterations", "20"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(model.exists() && d.join("m.lda.topics.json").exists());

    let out = run(&["rank-terms", "--snapshot", p(&snap), "--vocab", "food"]);
    assert_eq!(code(&out), 0);
    let terms: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(terms["AL"]["term"], "grits");

    let out = run(&[
        "curve", "--level", "state", "--snapshot", p(&snap), "--fractions", "0.5,1.0", "--bootstrap", "100",
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let curve: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(curve["accuracy"].as_array().unwrap().len(), 2);

    let out = run(&["task", "locale", "--level", "region", "--snapshot", p(&snap), "--bootstrap", "100"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["baseline"], 0.25);

    let out = run(&["task", "locale", "--level", "city", "--snapshot", p(&snap)]);
    assert_eq!(code(&out), 2, "state-only corpus has no city tweets");
}

fn http_get(port: u16, path: &str) -> Option<String> {
    let mut s = TcpStream::connect(("127.0.0.1", port)).ok()?;
    s.set_read_timeout(Some(Duration::from_secs(5))).ok()?;
    write!(s, "GET {path} HTTP/1.1\r\nHost: localhost\r\nConnection: close\r\n\r\n").ok()?;
    let mut buf = String::new();
    s.read_to_string(&mut buf).ok()?;
    Some(buf)
}

#[test]
fn serve_answers_requests() {
    let dir = tempfile::tempdir().unwrap();
    let snap = synthetic_snapshot(dir.path(), "small");
    let port = TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let mut child = t4f()
        .args(["serve", "--snapshot", p(&snap), "--port", &port.to_string(), "--cors"])
        .stdout(Stdio::null())
        .stderr(Stdio::null())
        .spawn()
        .unwrap();
    let start = Instant::now();
    let mut reply = None;
    while start.elapsed() < Duration::from_secs(60) {
        if let Some(r) = http_get(port, "/api/stats") {
            reply = Some(r);
            break;
        }
        std::thread::sleep(Duration::from_millis(100));
    }
    let bad = http_get(port, "/api/heatmap?phrase=x&cell=2.0");
    child.kill().unwrap();
    child.wait().unwrap();
    let reply = reply.expect("server came up");
    assert!(reply.starts_with("HTTP/1.1 200"), "{reply}");
    assert!(reply.contains("\"tweet_count\":6120"));
    assert!(bad.unwrap().starts_with("HTTP/1.1 400"));
}
