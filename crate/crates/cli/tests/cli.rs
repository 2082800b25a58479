use std::path::Path;
use std::process::{Command, Output};

fn ratecorr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ratecorr")).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = ratecorr(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

// Resolved preset for a subcommand, edited and written next to the outputs.
fn small_config(dir: &Path, cmd: &str, edit: impl FnOnce(&mut serde_json::Value)) -> String {
    let mut v: serde_json::Value = serde_json::from_str(&ok(&[cmd, "--print-config"])).unwrap();
    edit(&mut v);
    let path = dir.join(format!("{cmd}.json"));
    std::fs::write(&path, v.to_string()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn spectrum_to_stdout_has_header_and_rows() {
    let text = ok(&["spectrum"]);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# ratecorr spectrum"));
    assert_eq!(lines.next(), Some("# seed: none"));
    assert!(lines.next().unwrap().starts_with("# config: {"));
    assert_eq!(lines.next(), Some("k,re,im"));
    // CL10 has ten eigenvalues.
    assert_eq!(lines.count(), 10);
    assert_eq!(text, ok(&["spectrum", "--config", "table1"]));
}

#[test]
fn simulate_reruns_and_replays_byte_identically() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let c = dir.path().join("c.csv");
    let args = |p: &Path| vec!["simulate".to_string(), "--trials".into(), "300".into(), "--t-max".into(), "2".into(), "--seed".into(), "42".into(), "--out".into(), p.to_str().unwrap().into()];
    let run = |p: &Path| ok(&args(p).iter().map(String::as_str).collect::<Vec<_>>());
    run(&a);
    run(&b);
    let first = std::fs::read(&a).unwrap();
    assert_eq!(first, std::fs::read(&b).unwrap());
    assert!(String::from_utf8_lossy(&first).contains("# seed: 42"));
    ok(&["replay", a.to_str().unwrap(), "--out", c.to_str().unwrap()]);
    assert_eq!(first, std::fs::read(&c).unwrap());
    // A different seed changes the numbers but not the layout.
    let other = ok(&["simulate", "--trials", "300", "--t-max", "2", "--seed", "43"]);
    assert_ne!(other.as_bytes(), &first[..]);
    assert_eq!(other.lines().count(), String::from_utf8(first).unwrap().lines().count());
}

#[test]
fn compare_writes_four_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), "compare", |v| {
        v["trials"] = 200.into();
        v["t_max"] = 1.0.into();
    });
    let out = dir.path().join("cmp");
    ok(&["compare", "--config", &cfg, "--out", out.to_str().unwrap()]);
    let mut names: Vec<String> = std::fs::read_dir(&out).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert_eq!(names, ["corr.csv", "cov.csv", "potentials.csv", "var.csv"]);
    // Several tables need a directory.
    assert_eq!(ratecorr(&["compare", "--config", &cfg]).status.code(), Some(2));
    let replayed = dir.path().join("again");
    ok(&["replay", out.join("corr.csv").to_str().unwrap(), "--out", replayed.to_str().unwrap()]);
    for n in &names {
        assert_eq!(std::fs::read(out.join(n)).unwrap(), std::fs::read(replayed.join(n)).unwrap(), "{n}");
    }
}

#[test]
fn configuration_problems_exit_with_two() {
    // Missing file that is not a preset name.
    assert_eq!(ratecorr(&["simulate", "--config", "/nonexistent/cfg.json"]).status.code(), Some(2));
    // The spectrum has no seed.
    let out = ratecorr(&["spectrum", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("seed"));
    // Library validation errors count as configuration errors too.
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), "simulate", |v| v["trials"] = 0.into());
    let out = ratecorr(&["simulate", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("InvalidParameter"));
    let garbage = dir.path().join("x.csv");
    std::fs::write(&garbage, "k,re\n1,2\n").unwrap();
    assert_eq!(ratecorr(&["replay", garbage.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn numerical_failures_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), "simulate", |v| {
        v["trials"] = 4.into();
        v["noise"]["sigma"] = serde_json::json!([1e9, 0.0, 0.0, 0.0, 0.0]);
    });
    let out = ratecorr(&["simulate", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("NumericalBlowup"));
}
