//! Exit-code matrix: 0 ok, 2 for malformed or inconsistent input, 3 for
//! numeric-domain failures.

mod common;

use common::{data, run, run_with_stdin};

fn code(args: &[&str]) -> (i32, String) {
    let out = run(args);
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stderr).into_owned())
}

#[test]
fn malformed_json_names_the_path() {
    let (c, err) = code(&["q", "--a", &data("bad_entry.json"), "--b", &data("diag2.json")]);
    assert_eq!(c, 2);
    assert!(err.contains("unitary[1][1]"), "{err}");

    let (c, err) = code(&["q", "--a", r#"{"n": 2, "unitary": [[1, 0], [0, 1]]}"#, "--b", &data("diag2.json")]);
    assert_eq!(c, 2);
    assert!(err.contains("blocks"), "{err}");

    let (c, err) = code(&["q", "--a", r#"{"n": 2, "unitary": [[1, 0], [0, 1]], "blocks": [[1, 1], [1, 1]], "extra": 1}"#, "--b", &data("diag2.json")]);
    assert_eq!(c, 2);
    assert!(err.contains("extra"), "{err}");

    let (c, _) = code(&["latin-q", "--l1", "[[1, 2], [2, 1]] trailing", "--l2", &data("latin_bad.json")]);
    assert_eq!(c, 2);
}

#[test]
fn input_errors_exit_two() {
    let cases: Vec<Vec<String>> = vec![
        // dimension mismatch between the two algebras
        vec!["q".into(), "--a".into(), data("diag2.json"), "--b".into(), data("diag4.json")],
        // blocks do not cover n
        vec!["oracle-q".into(), "--a".into(), r#"{"n": 2, "unitary": [[1, 0], [0, 1]], "blocks": [[1, 1]]}"#.into(), "--b".into(), data("diag2.json")],
        // "n" disagrees with the matrix
        vec!["separating".into(), "--a".into(), r#"{"n": 3, "unitary": [[1, 0], [0, 1]], "blocks": [[1, 2]]}"#.into()],
        // ragged matrix
        vec!["hadamard".into(), "--x".into(), "[[1, 1], [1]]".into()],
        // bad partition strings
        vec!["quasiable".into(), "--x".into(), data("x_quasiable.json"), "--r".into(), "2,x".into(), "--c".into(), "3".into()],
        vec!["quasiable".into(), "--x".into(), data("x_quasiable.json"), "--r".into(), "2,0,1".into(), "--c".into(), "3".into()],
        vec!["quasiable".into(), "--x".into(), data("x_quasiable.json"), "--r".into(), "2,2".into(), "--c".into(), "3".into()],
        vec!["quasiable".into(), "--x".into(), data("x_quasiable.json"), "--r".into(), "2,1".into()],
        // not a Latin square
        vec!["latin-q".into(), "--l1".into(), data("latin_bad.json"), "--l2".into(), data("latin_bad.json")],
        // Latin squares of different orders
        vec!["latin-q".into(), "--l1".into(), data("latin4.json"), "--l2".into(), data("latin3_a.json")],
        // missing file
        vec!["q".into(), "--a".into(), "/nonexistent/a.json".into(), "--b".into(), data("diag2.json")],
        // inconsistent tolerances
        vec!["q".into(), "--a".into(), data("diag2.json"), "--b".into(), data("diag2.json"), "--tol-eq".into(), "1e-3".into(), "--tol-decision".into(), "1e-6".into()],
        // unistochastic test on a 4x4 matrix
        vec!["unistochastic3".into(), "--x".into(), "[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]".into()],
        // measurement with a multiplicity block
        vec!["amum".into(), "--a".into(), data("m2_tensor_i2.json"), "--b".into(), data("mub_q.json")],
        // unknown command / missing flag (clap usage errors)
        vec!["frobnicate".into()],
        vec!["q".into(), "--a".into(), data("diag2.json")],
    ];
    for args in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (c, err) = code(&args);
        assert_eq!(c, 2, "{args:?}: {err}");
    }
}

#[test]
fn domain_errors_exit_three() {
    let cases: Vec<Vec<String>> = vec![
        vec!["q".into(), "--a".into(), data("shear2.json"), "--b".into(), data("diag2.json")],
        vec!["quasiable".into(), "--x".into(), data("not_stochastic.json"), "--r".into(), "2,1".into(), "--c".into(), "2,1".into()],
        vec!["unistochastic3".into(), "--x".into(), data("not_stochastic.json")],
        // outcome counts differ
        vec!["mum-check".into(), "--a".into(), data("diag4.json"), "--b".into(), data("mub_q.json")],
        vec!["privacy".into(), "--a".into(), data("mub_p.json"), "--b".into(), data("mub_q.json"), "--epsilon=-0.5".into()],
    ];
    for args in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (c, err) = code(&args);
        assert_eq!(c, 3, "{args:?}: {err}");
    }
}

#[test]
fn stdin_and_inline_inputs() {
    let spec = std::fs::read_to_string(data("fourier4.json")).unwrap();
    let out = run_with_stdin(&["oracle-q", "--a", &data("diag4.json"), "--b", "-"], &spec);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["result"]["Q"].as_f64().unwrap() - 1.0).abs() < 1e-12);

    let (c, _) = code(&["hadamard", "--x", "[[1, 1], [1, -1]]"]);
    assert_eq!(c, 0);
    let out = run(&["hadamard", "--x", "[[[1, 0], [0, 1]], [[0, 1], [1, 0]]]"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["complex_hadamard"], true);
}
