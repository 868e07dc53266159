//! Command-line behaviour: exit codes, determinism and golden documents.

use std::path::{Path, PathBuf};
use std::process::Command as Proc;

use tropical_vertex::cli::{run, run_text, Command, Format, Job, Mode};
use tropical_vertex::error::Error;
use tropical_vertex::io::{emit_diagram, emit_wcf, parse_diagram, WcfJob};
use tropical_vertex::wcf::{example_k_s, example_s_s};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn tvx(args: &[&str]) -> (i32, String, String) {
    let out = Proc::new(env!("CARGO_BIN_EXE_tvx")).args(args).output().expect("spawn tvx");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn path(name: &str) -> String {
    data(name).to_string_lossy().into_owned()
}

/// Completed diagrams, which must pass `check` as they stand.
const COMPLETED: [&str; 3] = ["two_wall_completed.toml", "e12_completed.toml", "empty.toml"];

/// Seeds, which must complete cleanly.
const SEEDS: [&str; 3] = ["two_wall.toml", "two_wall_standard.toml", "e12_diagram.toml"];

#[test]
fn emit_parse_is_byte_identical_on_golden_diagrams() {
    for name in COMPLETED {
        let text = std::fs::read_to_string(data(name)).unwrap();
        let d = parse_diagram(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(emit_diagram(&d), text, "{name}");
    }
}

#[test]
fn wcf_golden_documents_match_the_built_identities() {
    for (name, (data_, lhs, rhs)) in [("wcf_k_s.toml", example_k_s(6)), ("wcf_s_s.toml", example_s_s(1, 1, 4))] {
        let text = std::fs::read_to_string(data(name)).unwrap();
        assert_eq!(emit_wcf(&WcfJob { data: data_, lhs, rhs }), text, "{name}");
    }
}

#[test]
fn every_golden_diagram_is_consistent() {
    for name in COMPLETED {
        let outcome = run(&Job::new(Command::Check, data(name))).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(outcome.exit_code(), 0, "{name}: {}", outcome.output);
    }
    for name in SEEDS {
        let seed = run(&Job::new(Command::Check, data(name))).unwrap();
        assert_eq!(seed.exit_code(), 1, "{name} should have defects");
        let mut job = Job::new(Command::Complete, data(name));
        job.format = Format::Structured;
        let done = run(&job).unwrap_or_else(|e| panic!("{name}: {e}"));
        let check = run_text(&Job::new(Command::Check, data(name)), &done.output).unwrap();
        assert_eq!(check.exit_code(), 0, "{name}: {}", check.output);
    }
}

#[test]
fn empty_diagram_has_no_defects() {
    let out = run(&Job::new(Command::Check, data("empty.toml"))).unwrap();
    assert!(out.ok);
    assert_eq!(out.output, "consistent (0 singular points)\n");
}

#[test]
fn completion_output_matches_golden_file() {
    let mut job = Job::new(Command::Complete, data("two_wall.toml"));
    job.format = Format::Structured;
    let out = run(&job).unwrap();
    assert_eq!(out.output, std::fs::read_to_string(data("two_wall_completed.toml")).unwrap());
    let mut job = Job::new(Command::Complete, data("e12_diagram.toml"));
    job.format = Format::Structured;
    job.mode = Mode::Perturb;
    let out = run(&job).unwrap();
    assert_eq!(out.output, std::fs::read_to_string(data("e12_completed.toml")).unwrap());
}

#[test]
fn gw_headline() {
    let out = run(&Job::new(Command::Gw, data("e12_seed.toml"))).unwrap();
    assert!(out.ok);
    assert!(out.output.starts_with("N_{0,(2,1)} = 0; N_{0,(m1,m1,m2)} = 1\n"), "{}", out.output);
}

#[test]
fn parse_errors_carry_a_position() {
    let text = "[ring]\nparams = [\"t\"]\ncap = 2\n\n[[wall]]\nkind = \"line\"\nm = [1, 0]\nbase = [\"0\", \"0\"]\nscalar = [\"z^(0,0) : 1\", \"z^(1,0) q : 1\"]\n";
    match run_text(&Job::new(Command::Check, PathBuf::from("x.toml")), text) {
        Err(Error::Parse { line, col, .. }) => {
            assert_eq!(line, 9);
            assert!(col > 1);
        }
        other => panic!("expected a parse error, got {other:?}"),
    }
}

#[test]
fn exit_codes() {
    assert_eq!(tvx(&["check", &path("two_wall_completed.toml")]).0, 0);
    assert_eq!(tvx(&["wcf", &path("wcf_k_s.toml")]).0, 0);
    assert_eq!(tvx(&["wcf", &path("wcf_s_s.toml")]).0, 0);
    // An uncompleted seed has defects.
    let (code, out, _) = tvx(&["check", &path("two_wall.toml")]);
    assert_eq!(code, 1, "{out}");
    // Truncating below the target degree leaves the answer undetermined.
    assert_eq!(tvx(&["gw", "--order", "2", &path("e12_seed.toml")]).0, 1);
    assert_eq!(tvx(&["check", &path("does_not_exist.toml")]).0, 2);
    assert_eq!(tvx(&["wcf", &path("two_wall.toml")]).0, 2);
    assert_eq!(tvx(&["complete", "--order", "0", &path("two_wall.toml")]).0, 2);
    assert_eq!(tvx(&["complete", "--mode", "sideways", &path("two_wall.toml")]).0, 2);
    assert_eq!(tvx(&["frobnicate"]).0, 2);
    // Shared parameters are not a standard seed.
    assert_eq!(tvx(&["complete", "--mode", "perturb", &path("two_wall.toml")]).0, 2);
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["complete", "--format", "structured"],
        vec!["complete", "--mode", "perturb", "--seed", "11"],
        vec!["render", "--mode", "perturb"],
    ] {
        let mut a = args.clone();
        let p = path("two_wall_standard.toml");
        a.push(&p);
        let first = tvx(&a);
        assert_eq!(first.0, 0, "{args:?}: {}", first.2);
        assert_eq!(tvx(&a), first, "{args:?}");
    }
    let t = path("tropical_21.toml");
    assert_eq!(tvx(&["tropical", &t]), tvx(&["tropical", &t]));
}

#[test]
fn out_flag_writes_a_file() {
    let dir = std::env::temp_dir().join(format!("tvx-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let target = dir.join("d.svg");
    let (code, stdout, _) = tvx(&["render", "--out", &target.to_string_lossy(), &path("two_wall.toml")]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let svg = std::fs::read_to_string(&target).unwrap();
    assert!(svg.starts_with("<svg "));
    std::fs::remove_dir_all(dir).unwrap();
}
