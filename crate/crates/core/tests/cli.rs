use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use gain_workbench::{cli, formats, Limits};
use tempfile::TempDir;

fn run(args: &[&str]) -> (i32, String) {
    cli::run(std::iter::once("workbench").chain(args.iter().copied()))
}

fn last_line(text: &str) -> &str {
    text.lines().last().unwrap_or("")
}

fn file(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const U12: &str = "matroid\nground a b\nindep -\nindep a\nindep b\n";

#[test]
fn check_sentence_exit_codes() {
    let dir = TempDir::new().unwrap();
    let m = file(&dir, "u12.m", U12);
    let f = file(&dir, "f.txt", "# one hyperedge exists\nexists Z1 hyp(Z1)\n");
    let (code, out) = run(&["check-sentence", "--matroid", s(&m), "--formula", s(&f)]);
    assert_eq!((code, last_line(&out)), (0, "SAT"));
    let (code, out) = run(&["check-sentence", "--matroid", s(&m), "--formula", "exists Z1 (hyp(Z1) & |Z1| = 2 mod 3)"]);
    assert_eq!((code, last_line(&out)), (1, "UNSAT"));
    let (code, out) = run(&["check-sentence", "--matroid", s(&m), "--formula", "exists Z1 (hyp(Z1)"]);
    assert_eq!(code, 2);
    assert!(out.contains("line 1, column 19"), "{out}");
    let bad = file(&dir, "bad.m", "matroid\nground a b\nindep a b\n");
    let (code, out) = run(&["check-sentence", "--matroid", s(&bad), "--formula", s(&f)]);
    assert_eq!(code, 2);
    assert!(out.contains("axiom"), "{out}");
}

#[test]
fn renaming_hint_for_reused_variables() {
    let dir = TempDir::new().unwrap();
    let m = file(&dir, "u12.m", U12);
    let (code, out) = run(&["check-sentence", "--matroid", s(&m), "--formula", "Z1 <= Z1 & exists Z1 hyp(Z1)"]);
    assert_eq!(code, 2);
    assert!(out.contains("try:"), "{out}");
}

#[test]
fn equiv_and_cleft_round_trip() {
    let dir = TempDir::new().unwrap();
    let a = file(&dir, "a.sys", "system\nground u\ncolours 1 2\ncolour - 2\ncolour u 1\n");
    let e1 = file(&dir, "e1.sys", "system\nground\ncolours 1 2\ncolour - 1\n");
    let e2 = file(&dir, "e2.sys", "system\nground\ncolours 1 2\ncolour - 2\n");
    let f = "exists Z1 hyp(Z1)";
    let (code, out) = run(&["equiv", "--system-a", s(&a), "--system-b", s(&a), "--formula", f]);
    assert_eq!((code, last_line(&out)), (0, "EQUAL (registry match)"));
    let (code, out) = run(&["equiv", "--system-a", s(&e1), "--system-b", s(&e2), "--formula", f]);
    assert_eq!((code, last_line(&out)), (1, "NOT EQUAL (cleft at |V|=0)"));

    let pi = dir.path().join("cleft.cmp");
    let (code, out) = run(&[
        "cleft-search",
        "--system-a",
        s(&e1),
        "--system-b",
        s(&e2),
        "--formula",
        f,
        "--max-ground",
        "2",
        "--out",
        s(&pi),
    ]);
    assert_eq!((code, last_line(&out)), (0, "CLEFT |V|=0 satisfied=(true,false)"));
    let check = |sys: &Path| run(&["check-sentence", "--system", s(sys), "--complement", s(&pi), "--formula", f]);
    assert_eq!(check(&e1).0, 0);
    assert_eq!(check(&e2).0, 1);
    let (code, out) =
        run(&["cleft-search", "--system-a", s(&a), "--system-b", s(&a), "--formula", f, "--max-ground", "1"]);
    assert_eq!((code, last_line(&out)), (1, "NO CLEFT (|V|<=1)"));
}

#[test]
fn registry_verb() {
    let dir = TempDir::new().unwrap();
    let a = file(&dir, "a.sys", "system\nground u\ncolours 1 2\ncolour - 2\ncolour u 1\n");
    let (code, out) = run(&["registry", "--system", s(&a), "--formula", "exists Z1 hyp(Z1)"]);
    assert_eq!((code, last_line(&out)), (0, "REGISTRY {r2[0],r2[1]}"));
    let (code, out) = run(&["registry", "--system", s(&a), "--formula", "hyp(Z1)", "--assign", "Z1=u"]);
    assert_eq!((code, last_line(&out)), (0, "REGISTRY r2[0]"));
    let (code, _) =
        run(&["registry", "--system", s(&a), "--formula", "|Z1| = 1 mod 3", "--assign", "Z1=u", "--delta", "2"]);
    assert_eq!(code, 2);
}

#[test]
fn written_files_are_re_readable() {
    let dir = TempDir::new().unwrap();
    let pg = dir.path().join("pg.m");
    assert_eq!(run(&["pg", "--p", "2", "--out", s(&pg)]).0, 0);
    let (code, _) = run(&["check-sentence", "--matroid", s(&pg), "--formula", "exists Z1 (hyp(Z1) & |Z1| = 0 mod 3)"]);
    assert_eq!(code, 0);

    let left = file(&dir, "l.m", "matroid\nground a x y\ncircuit a x y\n");
    let right = file(&dir, "r.m", "matroid\nground b x y\ncircuit b x y\n");
    let am = dir.path().join("am.m");
    let (code, out) = run(&["amalgam", "--left", s(&left), "--right", s(&right), "--out", s(&am)]);
    assert_eq!((code, last_line(&out)), (0, "AMALGAM matroid elements=4 rank=2"));
    let again = dir.path().join("am2.m");
    assert_eq!(run(&["amalgam", "--left", s(&am), "--right", s(&am), "--out", s(&again)]).0, 0);
    assert_eq!(fs::read_to_string(&am).unwrap(), fs::read_to_string(&again).unwrap());

    let ga = file(
        &dir,
        "a.gg",
        "gaingraph\ngroup cyclic 3\nvertex u\nvertex v\nvertex p\nloop Lu u 1\nloop Lv v 2\nedge e1 u p 1\nedge e2 p v 0\n",
    );
    let gb = file(
        &dir,
        "b.gg",
        "gaingraph\ngroup cyclic 3\nvertex u\nvertex v\nvertex q\nloop Lu u 1\nloop Lv v 2\nedge f1 u q 0\nedge f2 q v 0\n",
    );
    let glued = dir.path().join("glued.gg");
    let (code, out) =
        run(&["amalgam", "--left", s(&ga), "--right", s(&gb), "--u", "u", "--v", "v", "--out", s(&glued)]);
    assert_eq!(code, 0, "{out}");
    let fm = dir.path().join("frame.m");
    let (code, out) = run(&["frame-matroid", "--gaingraph", s(&glued), "--out", s(&fm)]);
    assert_eq!((code, last_line(&out)), (0, "FRAME-MATROID elements=6 rank=4"));
    assert!(formats::parse_matroid(&fs::read_to_string(&fm).unwrap(), &Limits::default()).is_ok());
}

#[test]
fn gadget_example_and_manifest() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("h.gg");
    let (code, out) = run(&[
        "gadget",
        "h",
        "--group",
        "cyclic20",
        "--gens",
        "1,19",
        "--N",
        "2",
        "--auto-params",
        "--out",
        s(&out_path),
    ]);
    assert_eq!(code, 0, "{out}");
    assert!(last_line(&out).starts_with("GADGET h vertices=9"));
    let text = fs::read_to_string(&out_path).unwrap();
    let g = formats::parse_gaingraph(&text, &Limits::default()).unwrap();
    let names: Vec<&str> = g.collections.iter().map(|(n, _)| n.as_str()).collect();
    for want in ["A", "C", "K", "T", "Q", "base"] {
        assert!(names.contains(&want), "missing collection {want}");
    }

    let (code, out) =
        run(&["gadget", "h", "--group", "cyclic20", "--gens", "1,19", "--N", "2", "--auto-params", "--star-only"]);
    assert_eq!(code, 0);
    assert!(last_line(&out).ends_with("group-order=20 s=2 m=5"), "{out}");
    let (code, out) = run(&["gadget", "h", "--group", "cyclic3", "--gens", "1,2", "--N", "2", "--auto-params"]);
    assert_eq!((code, last_line(&out)), (1, "ABSENT (no parameters satisfy the dagger condition)"));
    let (code, out) = run(&[
        "gadget",
        "h",
        "--group",
        "cyclic20",
        "--gens",
        "1,19",
        "--N",
        "2",
        "--s",
        "3",
        "--m",
        "5",
        "--star-only",
    ]);
    assert_eq!(code, 2);
    assert!(out.contains("dagger"), "{out}");
    let (code, out) =
        run(&["gadget", "lambda", "--group", "cyclic4", "--gamma1", "0", "--gamma2", "0,2", "--m", "1", "--star-only"]);
    assert_eq!(code, 0, "{out}");
    let (code, _) =
        run(&["gadget", "lambda", "--group", "cyclic4", "--gamma1", "0", "--gamma2", "0,2", "--m", "2", "--star-only"]);
    assert_eq!(code, 2);
}

#[test]
fn conviviality_outputs() {
    let dir = TempDir::new().unwrap();
    let dot = dir.path().join("g.dot");
    let csv = dir.path().join("g.csv");
    let (code, out) =
        run(&["conviviality", "--group", "cyclic4", "--subgroup", "cyclic2", "--dot", s(&dot), "--csv", s(&csv)]);
    assert_eq!((code, last_line(&out)), (0, "CONVIVIALITY vertices=2 cross-edges=1 quotient-vertices=1"));
    assert_eq!(fs::read_to_string(&csv).unwrap(), "vertex,v0,v1\nv0,1,1\nv1,1,1\n");
    assert!(fs::read_to_string(&dot).unwrap().starts_with("// finite restriction"));
    let grp = file(&dir, "s3.grp", &formats::write_group(&gain_workbench::groups::FiniteGroup::symmetric(3).unwrap()));
    let (code, out) = run(&["conviviality", "--group", s(&grp), "--subgroup", "cyclic4"]);
    assert_eq!((code, last_line(&out)), (1, "CONVIVIALITY vertices=0 cross-edges=0 quotient-vertices=0"));
}

#[test]
fn parallel_output_is_identical() {
    let dir = TempDir::new().unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["conviviality", "--group", "product cyclic2 cyclic4", "--subgroup", "cyclic2"],
        vec!["gadget", "lambda", "--group", "cyclic8", "--gamma1", "0,4", "--gamma2", "0,2,4,6", "--auto-params"],
    ];
    for args in cases {
        let serial = run(&args);
        let mut par = args.clone();
        par.push("--parallel");
        assert_eq!(serial, run(&par), "{args:?}");
    }
    let cfg = file(&dir, "caps.cfg", "# tight\nmax_ground = 3\n");
    let (code, out) = run(&["pg", "--p", "2", "--config", s(&cfg)]);
    assert_eq!(code, 2);
    assert!(out.contains("budget exceeded"), "{out}");
    let bad = file(&dir, "bad.cfg", "max_groud = 3\n");
    assert_eq!(run(&["pg", "--p", "2", "--config", s(&bad)]).0, 2);
}

#[test]
fn binary_propagates_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_workbench");
    let ok = Command::new(bin)
        .args(["solve-words", "--group", "symmetric3", "--eq", "x1x2x1'x2'", "--neq", "x1", "x2"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8(ok.stdout).unwrap().ends_with("SOLVABLE\n"));
    let no =
        Command::new(bin).args(["solve-words", "--group", "cyclic5", "--eq", "x1x1", "--neq", "x1"]).output().unwrap();
    assert_eq!(no.status.code(), Some(1));
    let err = Command::new(bin).args(["pg", "--p", "4"]).output().unwrap();
    assert_eq!(err.status.code(), Some(2));
}
