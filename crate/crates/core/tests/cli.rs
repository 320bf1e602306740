//! The `pqp` command line: exit codes, reports and files.

use std::path::{Path, PathBuf};
use std::process::Command;

use pqp::cli::{run, EXIT_CHECK_FAILED, EXIT_ERROR, EXIT_OK};
use pqp::oracle::{CayleyTable, DUMP_MAGIC};

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pqp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn pqp(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("pqp").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn check_prints_order() {
    let (code, out, _) = pqp(&["check", &fixture("paper_729.pqp")]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("order 729"), "{out}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(pqp(&["--bogus"]).0, EXIT_ERROR);
    assert_eq!(pqp(&["check"]).0, EXIT_ERROR);
    assert_eq!(
        pqp(&["verify", &fixture("paper_256.pqp"), "--suite", "nope"]).0,
        EXIT_ERROR
    );
    assert_eq!(pqp(&["make", "paper_729", "--p", "5"]).0, EXIT_ERROR);
    assert_eq!(pqp(&["make", "abelian", "--p", "3"]).0, EXIT_ERROR);
    let (code, _, err) = pqp(&["check", "/nonexistent/file.pqp"]);
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("nonexistent"), "{err}");
    assert_eq!(pqp(&["--help"]).0, EXIT_OK);
}

#[test]
fn parse_and_consistency_errors_exit_2() {
    let bad = scratch("bad.pqp");
    std::fs::write(&bad, "p 3\ngens a b\npower a = b^\n").unwrap();
    assert_eq!(pqp(&["check", bad.to_str().unwrap()]).0, EXIT_ERROR);
    // b^a = b^2 with a^3 = 1 and b^3 = 1 fails the overlap test: conjugation by a
    // squares b, which has order 2 on <b>, not 3
    let inconsistent = scratch("inconsistent.pqp");
    std::fs::write(
        &inconsistent,
        "p 3\ngens a b\npower a = 1\npower b = 1\nconj b a = b^2\n",
    )
    .unwrap();
    let (code, _, err) = pqp(&["check", inconsistent.to_str().unwrap()]);
    assert_eq!(code, EXIT_ERROR, "{err}");
}

#[test]
fn make_then_props() {
    let path = scratch("higman.pqp");
    let p = path.to_str().unwrap();
    assert_eq!(
        pqp(&["make", "higman", "--p", "3", "--r", "2", "-o", p]).0,
        EXIT_OK
    );
    let (code, out, _) = pqp(&["props", p]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("order 243"), "{out}");
    assert!(out.contains("frattini rank d(Phi) = 3"), "{out}");
    let line = out
        .lines()
        .find(|l| l.starts_with("quasi_powerful"))
        .unwrap();
    assert!(line.ends_with("true"), "{line}");
    let line = out.lines().find(|l| l.starts_with("powerful")).unwrap();
    assert!(line.ends_with("false"), "{line}");

    let (_, json, _) = pqp(&["--json", "props", p]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["body"]["properties"]["frattini_rank"], 3);
}

#[test]
fn make_writes_what_it_prints() {
    let (code, text, _) = pqp(&["make", "abelian", "--p", "2", "--exps", "2,1"]);
    assert_eq!(code, EXIT_OK);
    assert!(text.starts_with('#'), "{text}");
    let path = scratch("ab.pqp");
    pqp(&[
        "make",
        "abelian",
        "--p",
        "2",
        "--exps",
        "2,1",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), text);
    let (_, out, _) = pqp(&["check", path.to_str().unwrap()]);
    assert!(out.contains("order 8"), "{out}");
}

#[test]
fn failing_verdicts_exit_1() {
    let (code, out, _) = pqp(&["verify", &fixture("paper_256.pqp"), "--suite", "rps"]);
    assert_eq!(code, EXIT_CHECK_FAILED, "{out}");
    assert!(out.contains("FAILS"), "{out}");
    let (code, out, _) = pqp(&["verify", &fixture("paper_729.pqp"), "--suite", "paper"]);
    assert_eq!(code, EXIT_OK, "{out}");
}

#[test]
fn json_body_is_reproducible() {
    let f = fixture("paper_729.pqp");
    let body = |seed: &str| {
        let (code, json, _) = pqp(&[
            "--json",
            "verify",
            &f,
            "--suite",
            "all",
            "--seed",
            seed,
            "--max-pairs",
            "1000",
        ]);
        assert_eq!(code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["body"]["schema_version"], 1);
        assert_eq!(v["body"]["seed"].as_u64().unwrap().to_string(), seed);
        assert!(v["timing"].is_array());
        serde_json::to_string(&v["body"]).unwrap()
    };
    assert_eq!(body("0"), body("0"));
    assert_eq!(body("11"), body("11"));
    let (_, json, _) = pqp(&["--json", "verify", &f, "--max-pairs", "1000"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["body"]["seed"], 0);
}

#[test]
fn workers_do_not_change_the_body() {
    let f = fixture("paper_256.pqp");
    let body = |w: &str| {
        let (_, json, _) = pqp(&[
            "--json",
            "verify",
            &f,
            "--workers",
            w,
            "--max-pairs",
            "5000",
            "--seed",
            "3",
        ]);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        serde_json::to_string(&v["body"]).unwrap()
    };
    assert_eq!(body("1"), body("4"));
}

#[test]
fn subgroups_exhaustive_and_sampled() {
    let path = scratch("h32.pqp");
    let p = path.to_str().unwrap();
    pqp(&["make", "higman", "--p", "3", "--r", "2", "-o", p]);
    let (code, json, _) = pqp(&["--json", "subgroups", p, "--exhaustive", "--bound-check"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["body"]["subgroups"]["subgroups"], 117);
    assert_eq!(v["body"]["subgroups"]["max_rank"], 3);

    let f = fixture("paper_6561.pqp");
    let args = [
        "--json",
        "subgroups",
        &f,
        "--sample",
        "40",
        "--gens",
        "3",
        "--seed",
        "5",
    ];
    let (code, a, _) = pqp(&args);
    assert_eq!(code, EXIT_OK);
    let (_, b, _) = pqp(&args);
    let body = |s: &str| serde_json::from_str::<serde_json::Value>(s).unwrap()["body"].to_string();
    assert_eq!(body(&a), body(&b));
}

#[test]
fn oracle_dump_layout() {
    let path = scratch("t.bin");
    let (code, out, _) = pqp(&[
        "oracle",
        &fixture("paper_256.pqp"),
        "--full-assoc",
        "--dump",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("empty diff"), "{out}");
    let bytes = std::fs::read(&path).unwrap();
    assert_eq!(&bytes[..8], DUMP_MAGIC);
    assert_eq!(u64::from_le_bytes(bytes[8..16].try_into().unwrap()), 256);
    assert_eq!(bytes.len(), 16 + 4 * 256 * 256);
    let (n, table) = CayleyTable::read_dump(&bytes[..]).unwrap();
    assert_eq!(n, 256);
    assert!(table.iter().take(256).copied().eq(0..256));
}

#[test]
fn oracle_refuses_large_groups() {
    let path = scratch("h33.pqp");
    let p = path.to_str().unwrap();
    pqp(&["make", "higman", "--p", "3", "--r", "3", "-o", p]);
    assert_eq!(pqp(&["oracle", p]).0, EXIT_ERROR);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_pqp");
    let status = |args: &[&str]| {
        Command::new(bin)
            .args(args)
            .output()
            .unwrap()
            .status
            .code()
            .unwrap()
    };
    assert_eq!(status(&["check", &fixture("paper_256.pqp")]), 0);
    assert_eq!(
        status(&["verify", &fixture("paper_256.pqp"), "--suite", "rps"]),
        1
    );
    assert_eq!(status(&["frobnicate"]), 2);
}
