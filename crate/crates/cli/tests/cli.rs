use std::path::Path;
use std::process::Command;

fn btq(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_btq")).args(args).output().expect("binary runs")
}

fn run_to(dir: &Path, name: &str, args: &[&str]) -> Vec<u8> {
    let path = dir.join(name);
    let mut all = args.to_vec();
    let p = path.to_str().unwrap().to_string();
    all.extend(["--out", &p]);
    let out = btq(&all);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    std::fs::read(path).unwrap()
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for id in ["star-assoc", "thm-5-2"] {
        let args = ["run", id, "--seed", "3", "--samples", "2000"];
        let a = run_to(dir.path(), &format!("{id}-a.json"), &args);
        let b = run_to(dir.path(), &format!("{id}-b.json"), &args);
        assert_eq!(a, b, "{id}");
    }
}

#[test]
fn sweep_csv_is_written() {
    let dir = tempfile::tempdir().unwrap();
    run_to(dir.path(), "sweep.json", &["run", "thm-4-1", "--count", "6"]);
    let csv = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert!(csv.starts_with("h,entry,re,im\n"));
    assert!(csv.lines().count() > 6);
}

#[test]
fn exit_codes() {
    assert_eq!(btq(&["run", "ck-check"]).status.code(), Some(0));
    assert_eq!(btq(&["run", "schur-haar", "--N", "2", "--samples", "10"]).status.code(), Some(2));
    assert_eq!(btq(&["run", "no-such-id"]).status.code(), Some(1));
    assert_eq!(btq(&["run", "sber-7-2", "--cutoff", "3", "--strict"]).status.code(), Some(1));
    assert_eq!(btq(&["run", "thm-4-1", "--ratio", "2"]).status.code(), Some(1));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "N = 3\nseed = 9\n").unwrap();
    let out = btq(&["run", "lemma-4-3", "--config", cfg.to_str().unwrap(), "--seed", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["inputs"]["N"], 3);
    assert_eq!(json["inputs"]["seed"], 4);
}

#[test]
fn list_prints_registry() {
    let out = String::from_utf8(btq(&["list"]).stdout).unwrap();
    assert_eq!(out.lines().count(), btq::REGISTRY.len());
    assert!(out.contains("projection-8-5"));
}
