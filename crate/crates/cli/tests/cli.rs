use std::path::PathBuf;
use std::process::Command;

use gclh_cli::report::{emit, parse_machine, Format};

fn instance(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "instances", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn gclh(args: &[&str]) -> (i32, String, String) {
    gclh_env(args, None)
}

fn gclh_env(args: &[&str], cache: Option<&std::path::Path>) -> (i32, String, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gclh"));
    cmd.args(args).env_remove("GCLH_CACHE_DIR");
    if let Some(dir) = cache {
        cmd.env("GCLH_CACHE_DIR", dir);
    }
    let out = cmd.output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn grade_of_the_plane() {
    let ex1 = instance("ex1.gclh");
    let (code, out, _) = gclh(&["grade", "--instance", &ex1, "--ideal", "I", "--module", "M"]);
    assert_eq!(code, 0);
    assert!(out.contains("grade(I, M) = 2\n"), "{out}");
    let (_, out, _) = gclh(&["grade", "--instance", &ex1, "--ideal", "J", "--module", "M"]);
    assert!(out.contains("grade(J, M) = 1\n"), "{out}");
}

#[test]
fn top_local_cohomology_of_two_skew_lines() {
    let isq = instance("Isq.gclh");
    let (code, out, _) =
        gclh(&["lc", "--instance", &isq, "--i", "3", "--ideal", "Isq", "--module", "R", "--window", "-2:0"]);
    assert_eq!(code, 0);
    assert!(out.contains("  (-1,-1,-1,-1)    1\n"), "{out}");
    assert!(!out.contains("  (-1,-1,-1,0) "), "{out}");
    assert_eq!(out.lines().filter(|l| l.ends_with("    1")).count(), 16);
}

#[test]
fn main_theorem_on_the_cci_instance() {
    let cci = instance("cci1.gclh");
    let (code, out, err) =
        gclh(&["verify", "thm-main", "--instance", &cci, "--window", "-4:4", "--smax", "8", "--format", "machine"]);
    assert_eq!(code, 0, "{err}");
    let r = parse_machine(&out).unwrap();
    assert!(!r.verdicts.is_empty());
    assert!(r.verdicts.iter().all(|v| v.holds == Some(true)), "{out}");
}

#[test]
fn non_cci_instance_exits_with_witnesses() {
    let isq = instance("Isq.gclh");
    let (code, out, _) = gclh(&[
        "verify", "thm-main", "--instance", &isq, "--smax", "6", "--window", "-1:0", "--format", "machine",
    ]);
    assert_eq!(code, 1);
    let r = parse_machine(&out).unwrap();
    assert!(r.witnesses.iter().any(|w| w.index == 3 && w.degree.0 == [-1, -1, -1, -1]), "{out}");
    let last = r.verdicts.last().unwrap();
    assert_eq!(last.holds, Some(true), "the equivalence itself is consistent");
}

#[test]
fn machine_output_round_trips_and_is_deterministic() {
    let ex1 = instance("ex1.gclh");
    let args = ["glc", "--instance", &ex1, "--nmodule", "Q", "--window", "-2:1", "--format", "machine"];
    let (code, a, _) = gclh(&args);
    let (_, b, _) = gclh(&args);
    assert_eq!(code, 0);
    assert_eq!(a, b);
    let r = parse_machine(&a).unwrap();
    assert_eq!(emit(&r, Format::Machine), a);
    assert_eq!(r.schema_version, gclh_cli::report::SCHEMA_VERSION);
}

#[test]
fn cache_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let ex1 = instance("ex1.gclh");
    let args = ["dual", "--instance", &ex1, "--nmodule", "Q", "--window", "-2:2", "--i", "2"];
    let plain = gclh(&args);
    let first = gclh_env(&args, Some(dir.path()));
    let second = gclh_env(&args, Some(dir.path()));
    assert_eq!(plain, first);
    assert_eq!(first, second);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    let mut machine = args.to_vec();
    machine.extend(["--format", "machine"]);
    let cached = gclh_env(&machine, Some(dir.path()));
    assert_eq!(cached, gclh(&machine));
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.gclh");
    std::fs::write(&bad, "vars = [x, y]\nideal I = [x, q]\n").unwrap();
    let (code, _, err) = gclh(&["grade", "--instance", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2, column"), "{err}");

    let ex1 = instance("ex1.gclh");
    let (code, _, err) = gclh(&["lc", "--instance", &ex1, "--ideal", "Nope"]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown name `Nope`"), "{err}");

    let (code, _, _) = gclh(&["lc", "--instance", &ex1, "--char", "101"]);
    assert_eq!(code, 2);
    let (code, _, _) = gclh(&["frobnicate", "--instance", &ex1]);
    assert_eq!(code, 2);
}

#[test]
fn characteristic_from_the_menu() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("plain.gclh");
    std::fs::write(&p, "vars = [x, y]\nideal I = [x, y]\n").unwrap();
    for ch in ["2", "101"] {
        let (code, out, err) = gclh(&["grade", "--instance", p.to_str().unwrap(), "--module", "R", "--char", ch]);
        assert_eq!(code, 0, "{err}");
        assert!(out.contains(&format!("char      {ch}\n")), "{out}");
        assert!(out.contains("= 2\n"));
    }
    let (code, _, err) = gclh(&["grade", "--instance", p.to_str().unwrap(), "--module", "R", "--char", "13"]);
    assert_eq!(code, 2);
    assert!(err.contains("not available"), "{err}");
}

#[test]
fn unstabilized_limits_exit_three() {
    let ses = instance("ses1.gclh");
    let (code, out, err) = gclh(&["verify", "cor111", "--instance", &ses, "--smax", "3"]);
    assert_eq!(code, 3, "{out}{err}");
    assert!(err.contains("did not stabilize"), "{err}");
}

#[test]
fn long_exact_sequences_hold() {
    let ses = instance("ses1.gclh");
    let (code, out, err) = gclh(&["verify", "cor111", "--instance", &ses]);
    assert_eq!(code, 0, "{out}{err}");
}
