#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

pub fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

pub fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qortho"))
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn run_with_stdin(args: &[&str], stdin: &str) -> Output {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_qortho"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

/// One representative invocation per subcommand, keyed by golden-file name.
pub fn cases() -> Vec<(&'static str, Vec<String>)> {
    let d = data;
    vec![
        ("q_fourier", vec!["q".into(), "--a".into(), d("diag4.json"), "--b".into(), d("fourier4.json")]),
        (
            "quasiable_2_1",
            vec!["quasiable".into(), "--x".into(), d("x_quasiable.json"), "--r".into(), "2,1".into(), "--c".into(), "2,1".into()],
        ),
        ("hadamard_2", vec!["hadamard".into(), "--x".into(), d("hadamard2.json")]),
        ("unistochastic3", vec!["unistochastic3".into(), "--x".into(), d("x_quasiable.json")]),
        ("separating", vec!["separating".into(), "--a".into(), d("m2_tensor_i2.json")]),
        ("latin_q_identical", vec!["latin-q".into(), "--l1".into(), d("latin4.json"), "--l2".into(), d("latin4.json")]),
        ("mum_check_counterexample", vec!["mum-check".into(), "--a".into(), d("mub_p.json"), "--b".into(), d("counter_q.json")]),
        ("amum_mub", vec!["amum".into(), "--a".into(), d("mub_p.json"), "--b".into(), d("mub_q.json")]),
        (
            "privacy_mub",
            vec!["privacy".into(), "--a".into(), d("mub_p.json"), "--b".into(), d("mub_q.json"), "--epsilon".into(), "0.1".into()],
        ),
        ("oracle_q_fourier", vec!["oracle-q".into(), "--a".into(), d("diag4.json"), "--b".into(), d("fourier4.json")]),
        (
            "latin_q_text",
            vec!["latin-q".into(), "--l1".into(), d("latin3_a.json"), "--l2".into(), d("latin3_b.json"), "--format".into(), "text".into()],
        ),
    ]
}
