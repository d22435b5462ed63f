mod common;

use std::path::Path;
use std::process::Command;

use common::fixture_path;
use pachner::commands::run;

fn path(name: &str) -> String {
    fixture_path(name).to_string_lossy().into_owned()
}

fn pachner(args: &[&str]) -> pachner::commands::Outcome {
    let mut all = vec!["pachner"];
    all.extend_from_slice(args);
    run(all)
}

fn temp(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("pachner-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn validate_verdicts() {
    let o = pachner(&["validate", &path("s3_1tet")]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("verdict: closed 3-manifold"));
    let o = pachner(&["--porcelain", "validate", &path("rp2cone")]);
    assert_eq!(o.code, 1);
    assert!(o.stdout.contains("verdict\tnot a manifold\n"));
}

#[test]
fn bound_and_isosig_examples() {
    let o = pachner(&["bound", "--p", "1", "--q", "1", "--a", "1", "--cmp", "8"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("equal"));
    let o = pachner(&["bound", "--p", "2", "--q", "1", "--a", "1", "--cmp", "1000000"]);
    assert!(o.stdout.contains("cmp: greater"));
    let a = path("trefoil");
    assert_eq!(pachner(&["isosig", "--check", &a, &a]).code, 0);
    assert_eq!(pachner(&["isosig", "--check", &a, &path("figure8")]).code, 1);
    let o = pachner(&["isosig", &path("ball1")]);
    assert_eq!(o.stdout, "1.AAAA\n");
}

#[test]
fn exit_codes() {
    assert_eq!(pachner(&["frobnicate"]).code, 2);
    assert!(pachner(&["frobnicate"]).stderr.contains("Usage"));
    assert_eq!(pachner(&[]).code, 2);
    assert_eq!(pachner(&["validate", "/nonexistent.tri"]).code, 3);
    let bad = temp("bad.tri", "tri 1\n0: 0:0123 bdry bdry bdry\n");
    let o = pachner(&["validate", &bad]);
    assert_eq!(o.code, 3);
    let syntax = temp("syntax.tri", "tri 1\n0: bdry bdry 0:01x3 bdry\n");
    assert!(pachner(&["skeleton", &syntax]).stderr.contains("line 2, column 16"));
    assert_eq!(pachner(&["homology", &path("rp2cone")]).code, 3);
    assert_eq!(pachner(&["homology", &path("s3_1tet"), "--peripheral"]).code, 3);
    assert_eq!(pachner(&["--help"]).code, 0);
}

#[test]
fn moves_round_trip_through_files() {
    let o = pachner(&["moves", &path("ball1")]);
    assert_eq!(o.stdout.lines().count(), 5);
    let seq = temp("seq.moves", "M14 0\n");
    let o = pachner(&["moves", &path("ball1"), "--apply", &seq]);
    assert_eq!(o.code, 0);
    let out = temp("four.tri", &o.stdout);
    let o = pachner(&["--porcelain", "skeleton", &out]);
    assert!(o.stdout.contains("tetrahedra\t4\n"));
    let stale = temp("stale.moves", "M41 0 3\n");
    assert_eq!(pachner(&["moves", &path("ball1"), "--apply", &stale]).code, 3);
}

#[test]
fn walk_then_search_back() {
    let end = temp("end.tri", "");
    let o = pachner(&["--porcelain", "walk", &path("s3_1tet"), "--steps", "3", "--seed", "11", "--out", &end]);
    assert_eq!(o.code, 0);
    let o = pachner(&["--porcelain", "search", &end, &path("s3_1tet"), "--max-depth", "3", "--show-bound", "200"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.starts_with("status\tconnected\n"));
    assert!(o.stdout.contains("bound_vs_length\tgreater\n"));
    let o = pachner(&["search", &path("ball1"), &path("s3_1tet"), "--max-depth", "2"]);
    assert_eq!(o.code, 1);
    assert!(o.stdout.contains("status: exhausted"));
}

#[test]
fn normal_surface_commands() {
    let ball = path("ball1");
    let x = temp("x.nsc", "nsc 1\n1 0 0 0 0 0 0\n");
    let q = temp("q.nsc", "nsc 1\n0 0 0 0 1 0 0\n");
    let q2 = temp("q2.nsc", "nsc 1\n0 0 0 0 0 1 0\n");
    let o = pachner(&["--porcelain", "nsinfo", &ball, &x]);
    assert!(o.stdout.contains("euler_characteristic\t1\nweight\t3\n"));
    let o = pachner(&["nssum", &ball, &x, &x]);
    assert!(o.stdout.contains("chi: 1 + 1 = 2") && o.stdout.contains("weight: 3 + 3 = 6"));
    assert_eq!(pachner(&["nssum", &ball, &q, &q2]).code, 1);
    let big = temp("big.nsc", "nsc 1\n3 0 0 0 0 0 0\n");
    let o = pachner(&["--porcelain", "nsdecompose", &ball, &big]);
    assert!(o.stdout.contains("part\t3 x 1 0 0 0 0 0 0\nsummands\t3\n"));
    let o = pachner(&["--porcelain", "nsenum", &path("trefoil"), "--vertex"]);
    assert!(o.stdout.starts_with("kind\tvertex\ncount\t15\n"));
    let o = pachner(&["nsbounds", &path("s3_1tet")]);
    assert_eq!(o.code, 0);
    let short = temp("short.nsc", "nsc 2\n0 0 0 0 0 0 0 0 0 0 0 0 0 0\n");
    assert_eq!(pachner(&["nsinfo", &ball, &short]).code, 3);
    let bad = temp("bad.nsc", "nsc 1\n0 0 0 0 1 1 0\n");
    assert_eq!(pachner(&["nsinfo", &ball, &bad]).code, 3);
}

#[test]
fn binary_output_is_stable() {
    let bin = env!("CARGO_BIN_EXE_pachner");
    let go = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let args = ["--porcelain", "explore", &path("solidtorus"), "--radius", "1"];
    let a = go(&args);
    let b = go(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(Path::new(bin).exists());
    assert_eq!(go(&["nonsense"]).status.code(), Some(2));
}
