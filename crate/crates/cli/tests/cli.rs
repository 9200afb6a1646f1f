use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn morsegrad(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_morsegrad"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn path(p: &PathBuf) -> &str {
    p.to_str().unwrap()
}

#[test]
fn passing_checks_exit_zero() {
    for cmd in [
        "validate",
        "gradient",
        "morse-numbers",
        "betti",
        "check-perfect",
        "verify",
    ] {
        let o = morsegrad(&[cmd, path(&data("two_triangles.txt"))]);
        assert_eq!(code(&o), 0, "{cmd}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let o = morsegrad(&["persistence", path(&data("fan.txt"))]);
    assert_eq!(code(&o), 0);
}

#[test]
fn failed_perfectness_exits_one_with_witness() {
    let o = morsegrad(&["check-perfect", path(&data("dunce_cone.txt"))]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("witness"));

    let o = morsegrad(&[
        "check-perfect",
        path(&data("fig2.txt")),
        "--gradient",
        path(&data("fig2_all_critical.txt")),
    ]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("u=(1,2) q=1"));
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("dup.txt");
    std::fs::write(&bad, "params 1\nvertex 0 1\nvertex 0 2\n").unwrap();
    let o = morsegrad(&["validate", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("duplicate vertex"));

    let o = morsegrad(&["validate", "/nonexistent/input.txt"]);
    assert_eq!(code(&o), 2);
    let o = morsegrad(&["frobnicate"]);
    assert_eq!(code(&o), 2);
    let o = morsegrad(&["persistence", path(&data("four_cycle.txt"))]);
    assert_eq!(code(&o), 2);
}

#[test]
fn collisions_need_tiebreak_and_are_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("tie.txt");
    std::fs::write(
        &input,
        "params 2\nvertex 0 0 0\nvertex 1 0 1\nvertex 2 1 2\nsimplex 0 1 2\nclosure\n",
    )
    .unwrap();
    let input = input.to_str().unwrap();
    assert_eq!(code(&morsegrad(&["verify", input])), 2);

    let out = dir.path().join("r.json");
    let o = morsegrad(&[
        "verify",
        input,
        "--tiebreak",
        "--json",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["meta"]["options"]["tiebreak"], true);
    assert!(!v["meta"]["perturbations"].as_array().unwrap().is_empty());
}

#[test]
fn invalid_supplied_field_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    // vertex 0 enters before [0,1]
    std::fs::write(&g, "pair 0 : 0 1\ncritical 1\ncritical 2\ncritical 0 2\n").unwrap();
    let o = morsegrad(&[
        "validate",
        path(&data("fig2.txt")),
        "--gradient",
        g.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 1);
}

#[test]
fn reduce_prints_the_morse_complex() {
    let o = morsegrad(&["reduce", path(&data("fig2.txt"))]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let (cells, grades, params) = morsegrad::io::read_cell_complex(&text).unwrap();
    assert_eq!(params, 2);
    assert_eq!(cells.len(), 3);
    assert_eq!(grades.len(), 3);
}

#[test]
fn json_is_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    for name in [
        "fan.txt",
        "four_cycle.txt",
        "two_triangles.txt",
        "dunce_hat.txt",
        "dunce_cone.txt",
    ] {
        let mut reports = Vec::new();
        for threads in ["1", "4"] {
            let out = dir.path().join(format!("{name}.{threads}.json"));
            let o = morsegrad(&[
                "verify",
                path(&data(name)),
                "--threads",
                threads,
                "--json",
                out.to_str().unwrap(),
            ]);
            assert!(code(&o) <= 1);
            reports.push(std::fs::read(out).unwrap());
        }
        assert_eq!(reports[0], reports[1], "{name}");
    }
}

#[test]
fn random_verification_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for out in [&a, &b] {
        let o = morsegrad(&[
            "verify",
            "--random",
            "10",
            "--seed",
            "42",
            "--json",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    }
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}
