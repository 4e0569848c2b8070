//! The `vnlab` binary: printed values, exit codes and report files.

use std::path::Path;
use std::process::{Command, Output};

use vnlab::cli::{run, SpecFile, EXIT_CONFIG, EXIT_PASS, EXIT_VIOLATION};

fn vnlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vnlab"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn in_process(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(
        std::iter::once("vnlab").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (code, String::from_utf8(out).unwrap())
}

#[test]
fn entropy_of_shipped_states() {
    let o = vnlab(&["entropy", "m2-pure"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(
        stdout(&o).contains("S_tau = -0.6931472 nats"),
        "{}",
        stdout(&o)
    );
    assert!(in_process(&["entropy", "m2-tracial"])
        .1
        .contains("S_tau = 0.0000000 nats"));
    assert!(in_process(&["entropy", "m2-unbalanced"])
        .1
        .contains("S_tau = -0.1308120 nats"));
    let (code, text) = in_process(&["entropy", "m2-pure", "--log2"]);
    assert_eq!(code, EXIT_PASS);
    assert!(text.contains("S_tau = -1.0000000 bits"));
}

#[test]
fn index_of_shipped_inclusions() {
    for (name, pos, cp) in [
        ("c-in-m3", "3.0000000", "9.0000000"),
        ("m2-in-m4", "4.0000000", "4.0000000"),
        ("trivial", "1.0000000", "1.0000000"),
    ] {
        let (code, text) = in_process(&["index", name]);
        assert_eq!(code, EXIT_PASS);
        assert!(text.contains(&format!("pp_positive = {pos}")), "{text}");
        assert!(text.contains(&format!("pp_cp       = {cp}")), "{text}");
    }
}

#[test]
fn relent_and_maximize() {
    let (code, text) = in_process(&["relent", "m2-unbalanced", "m2-random"]);
    assert_eq!(code, EXIT_PASS, "{text}");
    let (code, text) = in_process(&["maximize", "m2-in-m4"]);
    assert_eq!(code, EXIT_PASS);
    assert!(text.contains("best gap  = 1.3862944"), "{text}");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    assert_eq!(
        vnlab(&["verify", "quick", "--out", out]).status.code(),
        Some(EXIT_PASS)
    );
    assert_eq!(
        vnlab(&["verify", "quick", "--tol", "0", "--out", out])
            .status
            .code(),
        Some(EXIT_VIOLATION)
    );
    assert_eq!(
        vnlab(&["verify", "no-such-experiment", "--out", out])
            .status
            .code(),
        Some(EXIT_CONFIG)
    );
    assert_eq!(
        vnlab(&["entropy", "no-such-state"]).status.code(),
        Some(EXIT_CONFIG)
    );
    assert_eq!(vnlab(&["frobnicate"]).status.code(), Some(EXIT_CONFIG));
    assert_eq!(
        vnlab(&["relent", "m2-pure", "m4-bell"]).status.code(),
        Some(EXIT_CONFIG)
    );
    assert_eq!(vnlab(&["--help"]).status.code(), Some(EXIT_PASS));

    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        SpecFile::desk()
            .to_json()
            .replace("\"schema\": 1", "\"schema\": 2"),
    )
    .unwrap();
    assert_eq!(
        vnlab(&["index", "trivial", "--spec", bad.to_str().unwrap()])
            .status
            .code(),
        Some(EXIT_CONFIG)
    );
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(
        vnlab(&["index", "trivial", "--spec", bad.to_str().unwrap()])
            .status
            .code(),
        Some(EXIT_CONFIG)
    );
}

#[test]
fn invalid_density_is_a_config_error() {
    let mut spec = SpecFile::desk();
    let s = spec.states.get_mut("m2-pure").unwrap();
    s.density.as_mut().unwrap()[0][0] = [2.0, 0.0];
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    std::fs::write(&path, spec.to_json()).unwrap();
    let o = vnlab(&["entropy", "m2-tracial", "--spec", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(EXIT_CONFIG));
    assert!(String::from_utf8_lossy(&o.stderr).contains("state m2-pure"));
}

fn files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                std::fs::read(&p).unwrap(),
            )
        })
        .collect();
    v.sort();
    v
}

#[test]
fn round_trip_gives_identical_reports() {
    let dir = tempfile::tempdir().unwrap();
    let spec = SpecFile::desk();
    let text = spec.to_json();
    assert_eq!(SpecFile::parse(&text).unwrap(), spec);
    let path = dir.path().join("copy.json");
    std::fs::write(&path, &text).unwrap();

    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let c = dir.path().join("c");
    assert_eq!(
        vnlab(&["verify", "bound-checks", "--out", a.to_str().unwrap()])
            .status
            .code(),
        Some(0)
    );
    let o = vnlab(&[
        "verify",
        "bound-checks",
        "--spec",
        path.to_str().unwrap(),
        "--out",
        b.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let single = Command::new(env!("CARGO_BIN_EXE_vnlab"))
        .args(["verify", "bound-checks", "--out", c.to_str().unwrap()])
        .env("VNE_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(single.status.code(), Some(0));
    let fa = files(&a);
    assert_eq!(fa.len(), 4);
    assert_eq!(fa, files(&b));
    assert_eq!(fa, files(&c));

    let csv = String::from_utf8(
        fa.iter()
            .find(|(n, _)| n == "slacks.csv")
            .unwrap()
            .1
            .clone(),
    )
    .unwrap();
    assert!(csv.starts_with("suite,trial,slack\n"));
    assert_eq!(csv.lines().count(), 1 + 1000 + 1000 + 300);
}

#[test]
fn seed_flag_changes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    vnlab(&["verify", "quick", "--out", a.to_str().unwrap()]);
    vnlab(&[
        "verify",
        "quick",
        "--seed",
        "8",
        "--out",
        b.to_str().unwrap(),
    ]);
    let tvn = |d: &Path| std::fs::read_to_string(d.join("tvn.json")).unwrap();
    assert_ne!(tvn(&a), tvn(&b));
    assert!(tvn(&b).contains("\"seed\": 8"));
}

#[test]
fn all_desk_scale_lists_every_suite() {
    let spec = SpecFile::desk();
    let names: Vec<&str> = spec.experiments["all-desk-scale"]
        .suites
        .iter()
        .map(|s| s.suite.as_str())
        .collect();
    assert_eq!(names, vnlab::harness::suite_names());
}
