//! End-to-end runs of the `evomap` binary on the storage-catalog fixture.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn evomap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_evomap")).args(args).output().expect("spawn evomap")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// Writes basic and compact diffs of the fixture into `dir`.
fn fixture_diffs(dir: &Path) -> (PathBuf, PathBuf) {
    let (basic, compact) = (dir.join("basic.diff"), dir.join("compact.diff"));
    let out = evomap(&[
        "diff",
        "--old",
        p(&fixture("catalog_old.ont")),
        "--new",
        p(&fixture("catalog_new.ont")),
        "--match",
        p(&fixture("catalog.match")),
        "--out",
        p(&compact),
        "--basic-out",
        p(&basic),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(stdout(&out), "diff_basic: 25 ops, diff_compact: 11 ops, aggregation passes: 2\n");
    (basic, compact)
}

#[test]
fn diff_writes_both_diffs() {
    let dir = tempfile::tempdir().unwrap();
    let (basic, compact) = fixture_diffs(dir.path());
    let compact_text = fs::read_to_string(compact).unwrap();
    assert!(compact_text.starts_with("#evomap-diff v1 kind=compact\n"));
    assert!(compact_text.contains("merge({CD-RW,DVD-ROM,Other},Other)"));
    assert!(fs::read_to_string(basic).unwrap().starts_with("#evomap-diff v1 kind=basic\n"));
}

#[test]
fn identity_diff_is_empty() {
    let old = fixture("catalog_old.ont");
    let out = evomap(&["diff", "--old", p(&old), "--new", p(&old), "--agg", "literal"]);
    assert!(out.status.success());
    assert!(stderr(&out).contains("diff_basic: 0 ops, diff_compact: 0 ops"));
    assert!(stdout(&out).lines().all(|l| l.starts_with('#')), "{}", stdout(&out));
}

#[test]
fn diff_output_is_deterministic() {
    let (old, new, m) = (fixture("catalog_old.ont"), fixture("catalog_new.ont"), fixture("catalog.match"));
    let args = ["diff", "--old", p(&old), "--new", p(&new), "--match", p(&m)];
    assert_eq!(stdout(&evomap(&args)), stdout(&evomap(&args)));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let old = fixture("catalog_old.ont");
    let new = fixture("catalog_new.ont");

    let missing = evomap(&["diff", "--old", "/nonexistent.ont", "--new", p(&new)]);
    assert_eq!(missing.status.code(), Some(1));

    let bad_match = dir.path().join("bad.match");
    fs::write(&bad_match, "NoSuchConcept\tOther\n").unwrap();
    let out = evomap(&["diff", "--old", p(&old), "--new", p(&new), "--match", p(&bad_match)]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));

    // Applying the forward diff to the new version cannot work.
    let (basic, _) = fixture_diffs(dir.path());
    let out = evomap(&["migrate", "--old", p(&new), "--diff", p(&basic)]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
}

#[test]
fn migrate_reaches_the_new_version() {
    let dir = tempfile::tempdir().unwrap();
    let (_, compact) = fixture_diffs(dir.path());
    let migrated = dir.path().join("migrated.ont");
    let out =
        evomap(&["migrate", "--old", p(&fixture("catalog_old.ont")), "--diff", p(&compact), "--out", p(&migrated)]);
    assert!(out.status.success(), "{}", stderr(&out));
    let identity = evomap(&["diff", "--old", p(&migrated), "--new", p(&fixture("catalog_new.ont"))]);
    assert!(stderr(&identity).contains("diff_basic: 0 ops"), "{}", stderr(&identity));
}

#[test]
fn roundtrip_prints_set_sizes() {
    let out = evomap(&[
        "roundtrip",
        "--old",
        p(&fixture("catalog_old.ont")),
        "--new",
        p(&fixture("catalog_new.ont")),
        "--match",
        p(&fixture("catalog.match")),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(stdout(&out), "o1\u{2229}o1''=19 o1\u{222a}o1''=19\n");
}

#[test]
fn inverting_twice_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (_, compact) = fixture_diffs(dir.path());
    let (inv, back) = (dir.path().join("inv.diff"), dir.path().join("back.diff"));
    assert!(evomap(&["invert", "--diff", p(&compact), "--out", p(&inv)]).status.success());
    assert!(evomap(&["invert", "--diff", p(&inv), "--out", p(&back)]).status.success());
    assert_ne!(fs::read(&compact).unwrap(), fs::read(&inv).unwrap());
    assert_eq!(fs::read(&compact).unwrap(), fs::read(&back).unwrap());
}

#[test]
fn stats_table_and_ratio() {
    let dir = tempfile::tempdir().unwrap();
    let (basic, compact) = fixture_diffs(dir.path());
    let out = evomap(&["stats", "--diff", p(&compact), "--basic", p(&basic)]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("kind\tcount\nadd\t1\n"), "{text}");
    assert!(text.contains("ratio %\t44.0\n"), "{text}");
    assert_eq!(text, stdout(&evomap(&["stats", "--diff", p(&compact), "--basic", p(&basic)])));
}

#[test]
fn stats_of_an_empty_diff_are_zero() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.diff");
    fs::write(&empty, "#evomap-diff v1 kind=basic\n").unwrap();
    let out = evomap(&["stats", "--diff", p(&empty)]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.lines().skip(1).all(|l| l.ends_with("\t0")), "{text}");
}

#[test]
fn rules_list_covers_the_catalog() {
    let out = evomap(&["rules", "list"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("id\tphase\torder\tsummary"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 31);
    assert!(rows[0].starts_with("b1\tbasic\t"));
}

#[test]
fn synth_writes_a_consistent_pair() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("pair");
    let out = evomap(&["synth", "--seed", "7", "--size", "200", "--edits", "20", "--out-dir", p(&out_dir)]);
    assert!(out.status.success(), "{}", stderr(&out));
    for f in ["old.ont", "new.ont", "match.tsv", "script.txt"] {
        assert!(out_dir.join(f).is_file(), "{f}");
    }
    assert!(fs::read_to_string(out_dir.join("script.txt")).unwrap().starts_with("# seed 7\n"));
    let rt = evomap(&[
        "roundtrip",
        "--old",
        p(&out_dir.join("old.ont")),
        "--new",
        p(&out_dir.join("new.ont")),
        "--match",
        p(&out_dir.join("match.tsv")),
    ]);
    assert!(rt.status.success(), "{}", stderr(&rt));
}

#[test]
fn repository_put_get_list() {
    let dir = tempfile::tempdir().unwrap();
    let repo = dir.path().join("repo");
    let repo_args = |rest: &[&str]| {
        let mut args = vec!["repo", "--repo", p(&repo)];
        args.extend_from_slice(rest);
        evomap(&args)
    };
    assert_eq!(repo_args(&["list"]).status.code(), Some(1));
    assert!(repo_args(&["init"]).status.success());

    let (_, compact) = fixture_diffs(dir.path());
    let old = fixture("catalog_old.ont");
    for (file, name) in [(&old, "catalog@v1"), (&fixture("catalog.match"), "v1-v2"), (&compact, "v1-v2.compact")] {
        let out = repo_args(&["put", p(file), "--name", name]);
        assert!(out.status.success(), "{}", stderr(&out));
    }
    let list = stdout(&repo_args(&["list"]));
    let kinds: Vec<&str> = list.lines().map(|l| l.split('\t').nth(1).unwrap()).collect();
    assert_eq!(kinds, ["version", "match", "diff"]);

    let got = dir.path().join("got.ont");
    assert!(repo_args(&["get", "catalog@v1", "--out", p(&got)]).status.success());
    assert_eq!(fs::read(&got).unwrap(), fs::read(&old).unwrap());

    // Same name, different content.
    let out = repo_args(&["put", p(&fixture("catalog_new.ont")), "--name", "catalog@v1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--force-new-entry"));

    // Corrupt the stored artifact.
    let hash = list.lines().next().unwrap().split('\t').nth(2).unwrap();
    fs::write(repo.join("versions").join(hash), "[concepts]\nX\n").unwrap();
    let out = repo_args(&["get", "catalog@v1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("corrupt"), "{}", stderr(&out));
}
