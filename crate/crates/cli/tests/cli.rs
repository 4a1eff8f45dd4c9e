use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn sdcode(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sdcode")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const E8: &str = "8 4\n11110000\n00111100\n00001111\n01010101\n";
// e8 with coordinates 1 and 8 swapped
const E8_SWAPPED: &str = "8 4\n01110001\n00111100\n10001110\n11010100\n";
const GOLAY: &str = "24 12
100000000000110111000101
010000000000101110001011
001000000000011100010111
000100000000111000101101
000010000000110001011011
000001000000100010110111
000000100000000101101111
000000010000001011011101
000000001000010110111001
000000000100101101110001
000000000010011011100011
000000000001111111111110
";

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn mass_and_bad_length() {
    let o = sdcode(&["mass", "8"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "30");
    assert_eq!(stdout(&sdcode(&["mass", "6", "--self-dual"])).trim(), "15");
    assert_eq!(sdcode(&["mass", "12"]).status.code(), Some(3));
}

#[test]
fn equiv_prints_witness_and_rejects() {
    let d = tempfile::tempdir().unwrap();
    let a = write(d.path(), "a.gm", E8);
    let b = write(d.path(), "b.gm", E8_SWAPPED);
    let o = sdcode(&["equiv", &a, &b]);
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).starts_with("equivalent"));
    let i = write(d.path(), "i.gm", "8 4\n11000000\n00110000\n00001100\n00000011\n");
    let o = sdcode(&["equiv", &a, &i]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("inequivalent"));
}

#[test]
fn parse_errors_exit_2() {
    let d = tempfile::tempdir().unwrap();
    let bad = write(d.path(), "bad.gm", "8 2\n1111000\n");
    assert_eq!(sdcode(&["weights", &bad]).status.code(), Some(2));
}

#[test]
fn code_queries() {
    let d = tempfile::tempdir().unwrap();
    let g = write(d.path(), "g.gm", GOLAY);
    let o = sdcode(&["covrad", &g]);
    assert!(stdout(&o).starts_with("radius 4\n"));
    let w = stdout(&sdcode(&["weights", &g]));
    assert!(w.contains("8\t759\n") && w.contains("12\t2576\n"));
    let aut = stdout(&sdcode(&["aut", &g]));
    assert!(aut.starts_with("order 244823040\n"));
    let pairs = stdout(&sdcode(&["subtract", &g, "--extremal-pairs"]));
    assert_eq!(pairs.lines().count(), 276);
    let s = sdcode(&["subtract", &g, "1", "2"]);
    assert!(stdout(&s).starts_with("22 11\n"));
}

#[test]
fn shadow_and_lift() {
    let d = tempfile::tempdir().unwrap();
    let i = write(d.path(), "i.gm", "6 3\n110000\n001100\n000011\n");
    let o = stdout(&sdcode(&["shadow", &i]));
    assert!(o.starts_with("min 3\n"), "{o}");
    let l = stdout(&sdcode(&["lift", &i]));
    assert!(l.starts_with("8 4\n"));
    let lifted = write(d.path(), "l.gm", &l);
    let e8 = write(d.path(), "e8.gm", E8);
    assert!(sdcode(&["equiv", &lifted, &e8]).status.success());
}

#[test]
fn glue_all_of_e8_pair() {
    let d = tempfile::tempdir().unwrap();
    let e8 = write(d.path(), "e8.gm", E8);
    let o = sdcode(&["glue", &e8, &e8, "--all"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("16 8\n"));
}

#[test]
fn classify_store_verify_census() {
    let d = tempfile::tempdir().unwrap();
    let dir = d.path().join("cat");
    let dir = dir.to_str().unwrap();
    for n in ["8", "16"] {
        assert!(sdcode(&["classify", n, "--out", dir, "--threads", "1"]).status.success());
    }
    let v = sdcode(&["verify-catalog", dir, "--mass"]);
    assert!(v.status.success(), "{v:?}");
    assert!(stdout(&v).contains("n=16 classes=2"));
    let c = stdout(&sdcode(&["census", dir]));
    assert!(c.contains("aut_order\t1344\t1"));
    // drop one length-16 class: the mass check must report incompleteness
    let f16 = d.path().join("cat").join("n16_d4.cat");
    let text = fs::read_to_string(&f16).unwrap();
    fs::write(&f16, text.lines().next().unwrap().to_string() + "\n").unwrap();
    assert_eq!(sdcode(&["verify-catalog", dir, "--mass"]).status.code(), Some(5));
    // corrupt a line
    fs::write(&f16, text.replacen(" 4 ", " 6 ", 1)).unwrap();
    assert_eq!(sdcode(&["verify-catalog", dir]).status.code(), Some(3));
}

#[test]
fn classify_budget_and_gating() {
    let d = tempfile::tempdir().unwrap();
    let ck = d.path().to_str().unwrap();
    assert_eq!(sdcode(&["classify", "24", "--budget", "1", "--checkpoint", ck]).status.code(), Some(5));
    let o = sdcode(&["classify", "24", "--checkpoint", ck]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 9);
    assert_eq!(sdcode(&["classify", "40"]).status.code(), Some(3));
    assert_eq!(sdcode(&["classify", "24", "--method", "bogus"]).status.code(), Some(3));
}

#[test]
fn ingest_reports_rejections() {
    let d = tempfile::tempdir().unwrap();
    let f = write(d.path(), "in.gm", &format!("{E8}\n{E8_SWAPPED}\n4 1\n1111\n"));
    let out = d.path().join("store");
    let o = sdcode(&["ingest", &f, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("added 1, duplicates 1, rejected 1"), "{}", stdout(&o));
}
