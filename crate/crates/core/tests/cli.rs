mod common;

use std::path::{Path, PathBuf};
use std::process::Command;

use common::corpus::*;
use common::*;
use tj_core::cli::{EXIT_FINDINGS, EXIT_OK, EXIT_USAGE, read_records, run};
use tj_core::xml::serialize_article;

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn tj(args: &[&str]) -> Out {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(
        std::iter::once("tj").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    Out {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn write(dir: &Path, name: &str, content: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, content).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn broken_citation() -> String {
    SKELETON.replace(
        "<p>Age related",
        "<p>See <ref type=\"bibl\" target=\"#b7\">[7]</ref>. Age related",
    )
}

fn italic_corpus(dir: &Path) -> Vec<PathBuf> {
    let opt = GenOptions {
        rends: &["italic", "italics"],
        ..Default::default()
    };
    write_corpus(dir, 31, 4, &opt).0
}

fn checksum(paths: &[PathBuf]) -> Vec<Vec<u8>> {
    paths.iter().map(|p| std::fs::read(p).unwrap()).collect()
}

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "good.xml", SKELETON);
    let r = tj(&["validate", s(&good)]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stdout);
    assert!(r.stdout.lines().all(|l| !l.contains(" error ")));

    let bad = write(dir.path(), "bad.xml", &broken_citation());
    let r = tj(&["validate", "--format", "records", s(&bad)]);
    assert_eq!(r.code, EXIT_FINDINGS);
    let recs = read_records(&r.stdout).unwrap();
    let errors: Vec<_> = recs.iter().filter(|r| r.kind == "error").collect();
    assert_eq!(errors.len(), 1, "{recs:#?}");
    assert_eq!(errors[0].code, "R9");
    assert_eq!(errors[0].file, s(&bad));

    assert_eq!(
        tj(&["validate", s(&dir.path().join("missing.xml"))]).code,
        EXIT_USAGE
    );
    assert_eq!(tj(&["validate"]).code, EXIT_USAGE);
    assert_eq!(tj(&["frobnicate"]).code, EXIT_USAGE);
}

#[test]
fn validate_config_from_flag_and_environment() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.xml", &broken_citation());
    let lenient = write(
        dir.path(),
        "lenient.json",
        r#"{"severity_overrides": {"R9": "warning"}}"#,
    );
    let broken = write(dir.path(), "broken.json", r#"{"colour": 1}"#);
    assert_eq!(
        tj(&["validate", "--config", s(&lenient), s(&bad)]).code,
        EXIT_OK
    );
    assert_eq!(
        tj(&["validate", "--config", s(&broken), s(&bad)]).code,
        EXIT_USAGE
    );

    let bin = env!("CARGO_BIN_EXE_tj");
    let via_env = Command::new(bin)
        .args(["validate", s(&bad)])
        .env("TJ_CONFIG", &lenient)
        .output()
        .unwrap();
    assert_eq!(via_env.status.code(), Some(EXIT_OK));
    let overridden = Command::new(bin)
        .args(["validate", "--config", s(&broken), s(&bad)])
        .env("TJ_CONFIG", &lenient)
        .output()
        .unwrap();
    assert_eq!(overridden.status.code(), Some(EXIT_USAGE));
    let plain = Command::new(bin)
        .args(["validate", s(&bad)])
        .env_remove("TJ_CONFIG")
        .output()
        .unwrap();
    assert_eq!(plain.status.code(), Some(EXIT_FINDINGS));
}

#[test]
fn explain_names_the_rule() {
    let r = tj(&["explain", "R9"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.stdout.starts_with("R9 (error)"));
    assert_eq!(tj(&["explain", "R99"]).code, EXIT_USAGE);
}

#[test]
fn codify_is_deterministic_and_converges_after_arbitrate() {
    let dir = tempfile::tempdir().unwrap();
    let corpus_dir = dir.path().join("corpus");
    std::fs::create_dir(&corpus_dir).unwrap();
    let files = italic_corpus(&corpus_dir);
    let schema = dir.path().join("schema.json");
    let r = tj(&["codify", s(&corpus_dir), "--out", s(&schema)]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    assert!(r.stdout.contains("4 documents"));
    let first = std::fs::read_to_string(&schema).unwrap();
    assert!(first.contains("\"italics\""));
    assert_eq!(
        tj(&["codify", s(&corpus_dir), "--out", s(&schema)]).code,
        EXIT_OK
    );
    assert_eq!(std::fs::read_to_string(&schema).unwrap(), first);

    for f in &files {
        let r = tj(&["schema-validate", "--schema", s(&schema), s(f)]);
        assert_eq!((r.code, r.stdout.as_str()), (EXIT_OK, ""));
    }

    let r = tj(&["variants", s(&corpus_dir)]);
    assert_eq!(r.code, EXIT_OK);
    assert_eq!(r.stdout.lines().count(), 1, "{}", r.stdout);
    assert!(r.stdout.starts_with("hi @rend [italic]"));

    let rules = write(
        dir.path(),
        "rules.txt",
        "# standardize\nhi rend italics -> italic\n",
    );
    let r = tj(&[
        "arbitrate",
        s(&corpus_dir),
        "--rules",
        s(&rules),
        "--in-place",
    ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    assert!(!r.stdout.starts_with("0 changes"));
    assert_eq!(
        tj(&["codify", s(&corpus_dir), "--out", s(&schema)]).code,
        EXIT_OK
    );
    let after = std::fs::read_to_string(&schema).unwrap();
    assert!(!after.contains("\"italics\""));
    assert!(after.contains("\"italic\""));
    assert_eq!(tj(&["variants", s(&corpus_dir)]).stdout, "");
}

#[test]
fn schema_validate_reports_unknown_constructs() {
    let dir = tempfile::tempdir().unwrap();
    let skel = write(dir.path(), "skel.xml", SKELETON);
    let schema = dir.path().join("schema.json");
    assert_eq!(tj(&["codify", s(&skel), "--out", s(&schema)]).code, EXIT_OK);
    let other = write(
        dir.path(),
        "other.xml",
        &SKELETON.replace("is a common cause", "is a <hi rend=\"x\">common</hi> cause"),
    );
    let r = tj(&[
        "schema-validate",
        "--format",
        "records",
        "--schema",
        s(&schema),
        s(&other),
    ]);
    assert_eq!(r.code, EXIT_FINDINGS);
    assert!(
        read_records(&r.stdout)
            .unwrap()
            .iter()
            .any(|r| r.code == "element" && r.kind == "error")
    );
    let r = tj(&[
        "schema-validate",
        "--base",
        "--schema",
        s(&schema),
        s(&other),
    ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stdout);
    assert_eq!(
        tj(&["schema-validate", "--schema", s(&skel), s(&other)]).code,
        EXIT_USAGE
    );
}

#[test]
fn arbitrate_edge_cases() {
    let dir = tempfile::tempdir().unwrap();
    let files = italic_corpus(dir.path());
    let before = checksum(&files);
    let empty = write(dir.path(), "empty.rules", "");
    let r = tj(&[
        "arbitrate",
        s(dir.path()),
        "--rules",
        s(&empty),
        "--in-place",
    ]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.stdout.starts_with("0 changes"));
    let conflict = write(
        dir.path(),
        "conflict.rules",
        "hi rend italics -> italic\nhi rend italics -> em\n",
    );
    let r = tj(&[
        "arbitrate",
        s(dir.path()),
        "--rules",
        s(&conflict),
        "--in-place",
    ]);
    assert_eq!(r.code, EXIT_USAGE);
    assert_eq!(checksum(&files), before);
    assert_eq!(
        tj(&["arbitrate", s(dir.path()), "--rules", s(&empty)]).code,
        EXIT_USAGE
    );

    let out = tempfile::tempdir().unwrap();
    let rules = write(out.path(), "r.rules", "hi rend italics -> italic");
    let r = tj(&[
        "arbitrate",
        s(dir.path()),
        "--rules",
        s(&rules),
        "--out-dir",
        s(&out.path().join("fixed")),
    ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    assert_eq!(checksum(&files), before);
    let rewritten =
        std::fs::read_to_string(out.path().join("fixed").join(files[0].file_name().unwrap()))
            .unwrap();
    assert!(!rewritten.contains("rend=\"italics\""));
}

#[test]
fn render_outputs_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let skel = write(dir.path(), "skel.xml", SKELETON);
    let r = tj(&["render", s(&skel), "--to", "text"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(
        r.stdout
            .starts_with("Multilocus Analysis of Age Related Macular Degeneration"),
        "{}",
        r.stdout
    );
    assert_eq!(tj(&["render", s(&skel), "--to", "text"]).stdout, r.stdout);
    assert_eq!(
        tj(&["render", s(&skel), "--style", "unknownname"]).code,
        EXIT_USAGE
    );
    let mangled = write(dir.path(), "mangled.xml", "<TEI><text>");
    assert_eq!(tj(&["render", s(&mangled)]).code, EXIT_USAGE);

    let out = dir.path().join("skel.html");
    let style = write(
        dir.path(),
        "house.json",
        &std::fs::read_to_string("data/styles/apa.json").unwrap(),
    );
    assert_eq!(
        tj(&["render", s(&skel), "--style", s(&style), "--out", s(&out)]).code,
        EXIT_OK
    );
    let apa = tj(&["render", s(&skel), "--style", "apa"]).stdout;
    assert_eq!(std::fs::read_to_string(&out).unwrap(), apa);
}

#[test]
fn corpus_products() {
    let dir = tempfile::tempdir().unwrap();
    let second = FULL.replace("10.1000/scs.example.18", "10.1000/scs.example.19");
    let b = write(dir.path(), "b.xml", FULL);
    write(dir.path(), "c.xml", &second);

    let r = tj(&[
        "query",
        s(dir.path()),
        "--in",
        "person",
        "--text",
        "dean",
        "--format",
        "records",
    ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    let hits = read_records(&r.stdout).unwrap();
    assert_eq!(hits.len(), 2);
    assert!(
        hits.iter()
            .all(|h| h.path.ends_with("persName[1]") && h.message == "Dean")
    );
    assert_eq!(hits[0].file, s(&b));

    let r = tj(&["biblio", s(dir.path()), "--format", "records"]);
    let recs = read_records(&r.stdout).unwrap();
    let dean: Vec<_> = recs
        .iter()
        .filter(|r| r.code == "doi:10.1000/ejhg.example.1")
        .collect();
    assert_eq!(dean.len(), 2);
    assert_eq!(dean[0].message, dean[1].message);
    let page = tj(&["biblio", s(dir.path())]).stdout;
    assert_eq!(page.matches("class=\"tj-biblio-entry\"").count(), 2);

    let r = tj(&["corrigenda", s(dir.path())]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.stdout.contains("class=\"tj-corrigenda\""));
    let recs =
        read_records(&tj(&["corrigenda", s(dir.path()), "--format", "records"]).stdout).unwrap();
    assert_eq!(recs.len(), 2);
    assert_eq!(
        (recs[0].kind.as_str(), recs[0].code.as_str()),
        ("correction", "2009-07-01")
    );
    let clean = tempfile::tempdir().unwrap();
    write(clean.path(), "a.xml", SKELETON);
    let r = tj(&["corrigenda", s(clean.path())]);
    assert_eq!(r.code, EXIT_OK);
    assert!(!r.stdout.contains("<li>"));
    assert_eq!(
        tj(&["corrigenda", s(clean.path()), "--format", "records"]).stdout,
        ""
    );
    let received = read_records(
        &tj(&[
            "corrigenda",
            s(clean.path()),
            "--kind",
            "received",
            "--format",
            "records",
        ])
        .stdout,
    )
    .unwrap();
    assert_eq!(received.len(), 1);
    assert_eq!(received[0].kind, "received");

    let r = tj(&[
        "index",
        s(dir.path()),
        "--kinds",
        "author",
        "--format",
        "records",
    ]);
    assert!(
        read_records(&r.stdout)
            .unwrap()
            .iter()
            .all(|r| r.code == "author")
    );
    assert_eq!(
        tj(&["index", s(dir.path()), "--kinds", "colour"]).code,
        EXIT_USAGE
    );
    let json = tj(&["index", s(dir.path()), "--format", "json"]).stdout;
    serde_json::from_str::<serde_json::Value>(&json).unwrap();

    assert_eq!(
        tj(&["query", s(dir.path()), "--from", "2009-13"]).code,
        EXIT_USAGE
    );
    assert_eq!(tj(&["query", s(dir.path())]).code, EXIT_USAGE);
    let r = tj(&[
        "query",
        s(dir.path()),
        "--from",
        "1900",
        "--to",
        "1901",
        "--format",
        "records",
    ]);
    assert_eq!((r.code, r.stdout.as_str()), (EXIT_OK, ""));
}

#[test]
fn corpus_commands_skip_broken_files() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "a.xml", SKELETON);
    write(dir.path(), "z.xml", "<TEI>");
    let r = tj(&["index", s(dir.path()), "--format", "records"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.stderr.contains("z.xml"));
    assert!(!r.stdout.is_empty());
    let empty = tempfile::tempdir().unwrap();
    assert_eq!(tj(&["codify", s(empty.path())]).code, EXIT_USAGE);
}

#[test]
fn read_only_commands_leave_inputs_alone() {
    let dir = tempfile::tempdir().unwrap();
    let (files, _) = write_corpus(dir.path(), 41, 3, &GenOptions::default());
    let before = checksum(&files);
    for args in [
        vec!["validate", s(&files[0])],
        vec!["index", s(dir.path())],
        vec!["biblio", s(dir.path())],
        vec!["corrigenda", s(dir.path())],
        vec!["query", s(dir.path()), "--text", "the"],
        vec!["variants", s(dir.path())],
        vec!["render", s(&files[1]), "--to", "text"],
    ] {
        let first = tj(&args);
        let second = tj(&args);
        assert_eq!(first.code, second.code);
        assert_eq!(first.stdout, second.stdout, "{args:?}");
    }
    assert_eq!(checksum(&files), before);
    assert_eq!(
        serialize_article(&generate(41, 0, &GenOptions::default()).article),
        before[0]
    );
}
