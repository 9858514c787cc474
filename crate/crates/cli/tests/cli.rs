use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn qposes(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qposes"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("spawn qposes")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Writes an asymmetric three-atom ligand and rasterizes it to `g.txt`.
fn ligand(dir: &TempDir) {
    std::fs::write(
        dir.path().join("a.txt"),
        "# element x y z weight\nC 0 0 0 1.0\nN 1 0 0 -0.5\nO 0 2 1 0.25\n",
    )
    .unwrap();
    let o = qposes(dir.path(), &["rasterize", "--atoms", "a.txt", "--bits", "2,2,2", "--out", "g.txt"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn count_prints_exact_product() {
    let dir = TempDir::new().unwrap();
    let o = qposes(dir.path(), &["count", "--dof", "100,100,100,100,100,100"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1000000000000\n");
}

#[test]
fn count_rejects_zero() {
    let dir = TempDir::new().unwrap();
    assert_eq!(qposes(dir.path(), &["count", "--dof", "4,0"]).status.code(), Some(1));
}

#[test]
fn verify_full_ensemble_passes() {
    let dir = TempDir::new().unwrap();
    ligand(&dir);
    let o = qposes(dir.path(), &["verify", "--grid", "g.txt", "--t-bits", "1,1,1", "--swaps", "--rots"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("verify PASS branches=512 matched=512 maxdev="), "{}", stdout(&o));
}

#[test]
fn verify_against_wrong_poses_exits_2() {
    let dir = TempDir::new().unwrap();
    ligand(&dir);
    let o = qposes(dir.path(), &["enumerate", "--grid", "g.txt", "--t-bits", "1,0,0", "--out", "p.txt"]);
    assert!(o.status.success());
    let o = qposes(dir.path(), &["verify", "--grid", "g.txt", "--t-bits", "0,0,1", "--poses", "p.txt"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).starts_with("verify FAIL"));
}

#[test]
fn stats_on_empty_circuit() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("c.txt"), "qubits 0\n").unwrap();
    let o = qposes(dir.path(), &["stats", "--circuit", "c.txt"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "qubits 0\ngates 0\nh 0\nx 0\ncx 0\nmcx 0\nswap 0\ncswap 0\nmax_mcx_controls 0\n"
    );
}

#[test]
fn format_closure_and_determinism() {
    let dir = TempDir::new().unwrap();
    ligand(&dir);
    let stages = ["--t-bits", "1,0,1", "--swaps", "--rots", "--shared"];
    let steps: Vec<Vec<&str>> = vec![
        [&["build", "--grid", "g.txt"][..], &stages, &["--out", "c.txt"]].concat(),
        vec!["simulate", "--circuit", "c.txt", "--grid", "g.txt", "--out", "s.txt"],
        vec!["simulate", "--circuit", "c.txt", "--grid", "g.txt", "--dense", "--out", "sd.txt"],
        [&["decode", "--state", "s.txt", "--grid", "g.txt"][..], &stages, &["--out", "d.txt"]].concat(),
        [&["enumerate", "--grid", "g.txt"][..], &stages, &["--out", "e.txt"]].concat(),
        [&["verify", "--grid", "g.txt", "--poses", "d.txt"][..], &stages].concat(),
        [&["verify", "--grid", "g.txt", "--poses", "e.txt"][..], &stages].concat(),
        vec!["stats", "--circuit", "c.txt"],
    ];
    for args in &steps {
        let o = qposes(dir.path(), args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let read = |f: &str| std::fs::read_to_string(dir.path().join(f)).unwrap();
    assert!(read("e.txt").starts_with("grid 2 2 2 1\n# settings=32 "));
    assert_eq!(read("s.txt").lines().next(), Some("state 11"));

    // identical inputs give byte-identical outputs
    let first = (read("c.txt"), read("s.txt"), read("d.txt"), read("e.txt"));
    for args in &steps[..5] {
        assert!(qposes(dir.path(), args).status.success());
    }
    assert_eq!(first, (read("c.txt"), read("s.txt"), read("d.txt"), read("e.txt")));
}

#[test]
fn qasm_output() {
    let dir = TempDir::new().unwrap();
    let o = qposes(dir.path(), &["build", "--bits", "2,2,2", "--t-bits", "0,0,2", "--format", "qasm"]);
    assert_eq!(o.status.code(), Some(0));
    let q = stdout(&o);
    assert!(q.starts_with("OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[8];\nh q[6];\nh q[7];\n"), "{q}");
}

#[test]
fn usage_errors_exit_1() {
    let dir = TempDir::new().unwrap();
    let unknown = qposes(dir.path(), &["count", "--dof", "2", "--frobnicate"]);
    assert_eq!(unknown.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&unknown.stderr).contains("Usage"));
    assert_eq!(qposes(dir.path(), &["build", "--bits", "2,2"]).status.code(), Some(1));
    assert_eq!(qposes(dir.path(), &["stats", "--circuit", "missing.txt"]).status.code(), Some(1));
    assert_eq!(qposes(dir.path(), &["--help"]).status.code(), Some(0));
}

#[test]
fn validation_errors_exit_1() {
    let dir = TempDir::new().unwrap();
    ligand(&dir);
    // non-cubic rotation plane
    let o = qposes(dir.path(), &["build", "--bits", "2,3,2", "--rots"]);
    assert_eq!(o.status.code(), Some(1));
    // translation register wider than the axis
    let o = qposes(dir.path(), &["enumerate", "--grid", "g.txt", "--t-bits", "3,0,0"]);
    assert_eq!(o.status.code(), Some(1));
    // atom beyond the lattice
    std::fs::write(dir.path().join("far.txt"), "C 0 0 0\nC 9 0 0\n").unwrap();
    let o = qposes(dir.path(), &["rasterize", "--atoms", "far.txt", "--bits", "1,1,1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("atom 1"));
}
