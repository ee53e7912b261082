//! End-to-end tests of the `gmmn` binary: exit codes, file outputs,
//! and rendering.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gmmn"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin().args(args).current_dir(dir).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no exit code")
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

#[test]
fn solve_verify_round_trip_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(
        d,
        "inst.txt",
        "gmmn instance v1\ndim 2\npairs 2\n0 0 3 2\n-2 4 1 -3\n",
    );

    let out = run_in(d, &["solve", "inst.txt", "--out", "net.txt"]);
    assert_eq!(code(&out), 0, "{:?}", out);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("n=2 d=2 cost="), "{}", stdout);

    let out = run_in(d, &["verify", "inst.txt", "net.txt"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8(out.stdout).unwrap().contains("feasible"));

    // an empty network cannot serve this instance: verify exits 1
    write(d, "empty.txt", "gmmn network v1\ndim 2\nsegments 0\nlength 0\n");
    let out = run_in(d, &["verify", "inst.txt", "empty.txt"]);
    assert_eq!(code(&out), 1);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("infeasible (2 violated pair(s))"), "{}", stdout);
    assert!(stdout.contains("violated (0,0) -- (3,2)"), "{}", stdout);
}

#[test]
fn parse_and_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();

    // malformed instance: exit 2
    write(d, "bad.txt", "not an instance\n");
    let out = run_in(d, &["solve", "bad.txt", "--out", "x.txt"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8(out.stderr).unwrap().contains("error:"));

    // missing file: exit 2
    let out = run_in(d, &["solve", "missing.txt", "--out", "x.txt"]);
    assert_eq!(code(&out), 2);

    // declared pair count disagrees with the body: exit 2
    write(d, "short.txt", "gmmn instance v1\ndim 2\npairs 3\n0 0 1 1\n");
    let out = run_in(d, &["verify", "short.txt", "short.txt"]);
    assert_eq!(code(&out), 2);

    // improved-2d on a 3D instance: exit 3
    write(
        d,
        "inst3.txt",
        "gmmn instance v1\ndim 3\npairs 1\n0 0 0 1 1 1\n",
    );
    let out = run_in(
        d,
        &["solve", "inst3.txt", "--algo", "improved-2d", "--out", "x.txt"],
    );
    assert_eq!(code(&out), 3);

    // invalid generator configuration: exit 3
    let out = run_in(
        d,
        &[
            "gen", "--family", "random", "--dim", "1", "--out", "x.txt",
        ],
    );
    assert_eq!(code(&out), 3);

    // tampered network (stated length wrong): exit 2 on parse
    write(
        d,
        "tampered.txt",
        "gmmn network v1\ndim 2\nsegments 1\n0 0 0 5\nlength 4\n",
    );
    write(d, "inst.txt", "gmmn instance v1\ndim 2\npairs 1\n0 0 0 5\n");
    let out = run_in(d, &["verify", "inst.txt", "tampered.txt"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn gen_tight_writes_instance_and_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = run_in(
        d,
        &[
            "gen", "--family", "tight", "--k", "3", "--eps", "1/16", "--out", "tight.txt",
            "--cert-out", "cert.txt",
        ],
    );
    assert_eq!(code(&out), 0, "{:?}", out);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("7 pairs"), "{}", stdout);
    assert!(stdout.contains("length 9/8"), "{}", stdout);

    // certificate verifies against the generated instance
    let out = run_in(d, &["verify", "tight.txt", "cert.txt"]);
    assert_eq!(code(&out), 0, "{:?}", out);

    // both algorithms solve it
    for algo in ["recursive-d", "improved-2d"] {
        let out = run_in(d, &["solve", "tight.txt", "--algo", algo, "--out", "net.txt"]);
        assert_eq!(code(&out), 0, "{}: {:?}", algo, out);
    }

    // out-of-range eps: exit 3
    let out = run_in(
        d,
        &["gen", "--family", "tight", "--eps", "1/2", "--out", "t.txt"],
    );
    assert_eq!(code(&out), 3);
}

#[test]
fn gen_random_and_mmn_solve_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for (family, extra) in [("random", vec!["--dim", "3"]), ("mmn", vec![])] {
        let mut args = vec![
            "gen", "--family", family, "--n", "12", "--seed", "3", "--out", "inst.txt",
        ];
        args.extend(extra);
        let out = run_in(d, &args);
        assert_eq!(code(&out), 0, "{}: {:?}", family, out);
        let out = run_in(d, &["solve", "inst.txt", "--out", "net.txt", "--jobs"]);
        assert_eq!(code(&out), 0, "{}: {:?}", family, out);
        let out = run_in(d, &["verify", "inst.txt", "net.txt"]);
        assert_eq!(code(&out), 0, "{}: {:?}", family, out);
    }
}

#[test]
fn ratio_table_with_oracle_and_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(
        d,
        "small.txt",
        "gmmn instance v1\ndim 2\npairs 2\n0 0 2 2\n-1 1 1 0\n",
    );
    let out = run_in(
        d,
        &[
            "ratio", "small.txt", "--algos", "recursive-d,improved-2d", "--reference", "oracle",
        ],
    );
    assert_eq!(code(&out), 0, "{:?}", out);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("recursive-d"), "{}", stdout);
    assert!(stdout.contains("improved-2d"), "{}", stdout);

    // certificate reference requires a value
    let out = run_in(
        d,
        &["ratio", "small.txt", "--reference", "certificate"],
    );
    assert_eq!(code(&out), 3);
    let out = run_in(
        d,
        &[
            "ratio", "small.txt", "--reference", "certificate", "--certificate", "4",
        ],
    );
    assert_eq!(code(&out), 0, "{:?}", out);

    // no inputs: exit 3
    let out = run_in(d, &["ratio"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn render_produces_svg() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write(
        d,
        "inst.txt",
        "gmmn instance v1\ndim 2\npairs 2\n0 0 3 2\n-2 4 1 -3\n",
    );
    let out = run_in(d, &["solve", "inst.txt", "--out", "net.txt"]);
    assert_eq!(code(&out), 0);

    let out = run_in(d, &["render", "inst.txt", "net.txt", "--out", "pic.svg"]);
    assert_eq!(code(&out), 0, "{:?}", out);
    let svg = std::fs::read_to_string(d.join("pic.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("<rect")); // pair boxes
    assert!(svg.contains("<line")); // network segments
    assert!(svg.contains("<circle")); // terminals
    assert_eq!(svg.matches("<circle").count(), 4);

    // instance-only rendering works too
    let out = run_in(d, &["render", "inst.txt", "--out", "pic2.svg"]);
    assert_eq!(code(&out), 0, "{:?}", out);

    // 3D instances are rejected with a config error
    write(
        d,
        "inst3.txt",
        "gmmn instance v1\ndim 3\npairs 1\n0 0 0 1 1 1\n",
    );
    let out = run_in(d, &["render", "inst3.txt", "--out", "bad.svg"]);
    assert_eq!(code(&out), 3);
}
