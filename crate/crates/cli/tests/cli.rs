use std::fs;
use std::process::{Command, Output};

fn wt1(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wt1")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn utilities() {
    assert_eq!(stdout(&wt1(&["sturm", "124"])), "index 192 bound 16\n");
    assert_eq!(stdout(&wt1(&["discs", "23"])), "-23\n");
    assert_eq!(stdout(&wt1(&["discs", "1"])), "\n");
    let list = stdout(&wt1(&["gen-dihedral", "-23", "1", "--list"]));
    assert_eq!(list.lines().count(), 2);
    assert!(list.starts_with("1  conductor (1, 1)"));
}

#[test]
fn exit_codes() {
    assert_eq!(wt1(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(wt1(&["sturm"]).status.code(), Some(64));
    assert_eq!(wt1(&["classify", "/nonexistent/x.wt1"]).status.code(), Some(66));
    assert_eq!(wt1(&["gen-dihedral", "-23", "1", "--char", "3"]).status.code(), Some(1));
    assert_eq!(wt1(&["gen-dihedral", "5", "1"]).status.code(), Some(1));
    assert_eq!(wt1(&["--help"]).status.code(), Some(0));
}

#[test]
fn generate_validate_classify() {
    let dir = tempfile::tempdir().unwrap();
    let rec = dir.path().join("f.wt1");
    let cert = dir.path().join("f.cert");
    let out = wt1(&["gen-dihedral", "-7", "9", "--char", "2", "--terms", "120", "-o", rec.to_str().unwrap()]);
    assert!(out.status.success());
    let v = wt1(&["validate", rec.to_str().unwrap()]);
    assert!(v.status.success(), "{}", stdout(&v));
    assert!(wt1(&["classify", rec.to_str().unwrap(), "-o", cert.to_str().unwrap()]).status.success());
    assert!(fs::read_to_string(&cert).unwrap().contains("verdict DIHEDRAL"));
    let r = wt1(&["verify", rec.to_str().unwrap(), cert.to_str().unwrap()]);
    assert!(r.status.success());
    assert!(stdout(&r).ends_with("0 discrepancies\n"));

    // a broken coefficient: validation and classification refuse
    let text = fs::read_to_string(&rec).unwrap();
    let broken = dir.path().join("g.wt1");
    let line = text.lines().find(|l| l.starts_with("a 6 ")).unwrap();
    fs::write(&broken, text.replace(line, "a 6 7")).unwrap();
    assert_eq!(wt1(&["validate", broken.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(wt1(&["classify", broken.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn batch_reports_the_worst_outcome() {
    let dir = tempfile::tempdir().unwrap();
    let fixtures = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/fixtures");
    fs::copy(format!("{fixtures}/level633_a5.wt1"), dir.path().join("a5.wt1")).unwrap();
    fs::write(dir.path().join("junk.wt1"), "not a record\n").unwrap();
    fs::write(dir.path().join("ignored.txt"), "x").unwrap();
    let out = wt1(&["batch", dir.path().to_str().unwrap(), "--prime-budget", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let table = stdout(&out);
    assert_eq!(table.lines().count(), 3);
    assert!(table.contains("INCONCLUSIVE"));
    assert!(table.contains("ERROR"));
    assert!(dir.path().join("a5.wt1.cert").exists());
    assert!(!dir.path().join("junk.wt1.cert").exists());

    fs::remove_file(dir.path().join("junk.wt1")).unwrap();
    assert_eq!(wt1(&["batch", dir.path().to_str().unwrap(), "--prime-budget", "2"]).status.code(), Some(2));
    assert_eq!(wt1(&["batch", dir.path().to_str().unwrap()]).status.code(), Some(0));
}
