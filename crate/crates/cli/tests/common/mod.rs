#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_denomlab")
}

pub fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).env_remove("DENOMLAB_THREADS").output().expect("binary runs")
}

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

/// `(name, arguments)` for every committed golden invocation.
pub fn invocations() -> Vec<(String, Vec<String>)> {
    let text = std::fs::read_to_string(golden_dir().join("invocations.txt")).expect("invocation list");
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let (name, args) = l.split_once(':').expect("`name: args`");
            (name.trim().to_string(), args.split_whitespace().map(String::from).collect())
        })
        .collect()
}

/// Stdout of one invocation at the given thread count.
pub fn golden_output(args: &[String], threads: usize) -> Vec<u8> {
    let t = threads.to_string();
    let mut all: Vec<&str> = vec!["--threads", &t];
    all.extend(args.iter().map(String::as_str));
    let out = run(&all);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

/// Names of the invocations whose output differs from the committed file.
pub fn golden_mismatches(threads: usize) -> Vec<String> {
    let bless = std::env::var_os("DENOMLAB_BLESS").is_some();
    let mut bad = Vec::new();
    for (name, args) in invocations() {
        let path = golden_dir().join(format!("{name}.csv"));
        let got = golden_output(&args, threads);
        if bless {
            std::fs::write(&path, &got).expect("write golden file");
            continue;
        }
        if std::fs::read(&path).ok().as_deref() != Some(&got[..]) {
            bad.push(name);
        }
    }
    bad
}
