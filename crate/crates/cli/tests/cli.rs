use std::io::Write;
use std::process::{Command, Output, Stdio};

use orbipoisson::catalog::{self, CatalogEntry, GammaN};
use orbipoisson::pbw::check_bg;
use orbipoisson::scalars::{parse_cyclotomic, Cyclotomic};
use orbipoisson_cli::structure::{parse_json, Limits, StructureFile};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_orbipoisson"))
}

fn run(args: &[&str], stdin: Option<&str>) -> Output {
    let mut cmd = bin();
    cmd.args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    let mut child = cmd.spawn().unwrap();
    {
        let mut si = child.stdin.take().unwrap();
        if let Some(s) = stdin {
            si.write_all(s.as_bytes()).unwrap();
        }
    }
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn limits() -> Limits {
    Limits {
        max_group_order: 1000,
        max_conductor: 1000,
    }
}

fn entries() -> Vec<CatalogEntry> {
    let one = |m| Cyclotomic::one(m);
    let g1 = GammaN::new(1, &one(3), None).unwrap();
    let c0 = parse_cyclotomic("1 + z", 5).unwrap();
    let g2 = GammaN::new(2, &c0, None).unwrap();
    vec![
        g1.entry(&one(3), false).unwrap(),
        g2.entry(&c0, false).unwrap(),
        catalog::z2_constant(&Cyclotomic::from_i64(1, 3)).unwrap(),
        catalog::z2_r3_linear(1).unwrap(),
        catalog::z2_r3_linear(2).unwrap(),
        catalog::cyclic_qmoyal(3).unwrap(),
        catalog::symplectic_cyclic(3, &one(1), &Cyclotomic::from_i64(1, 2)).unwrap(),
    ]
}

#[test]
fn catalog_entries_round_trip() {
    for e in entries() {
        let file = StructureFile::from_entry(&e);
        let text = serde_json::to_string_pretty(&file).unwrap();
        let parsed = parse_json(&text).unwrap();
        assert_eq!(parsed, file, "{}", e.name);
        let loaded = parsed.load(&limits()).unwrap();
        assert_eq!(loaded.pair.pi, e.pair.pi, "{}", e.name);
        assert_eq!(loaded.pair.b, e.pair.b, "{}", e.name);
        let again = StructureFile::emit(file.name.clone(), &loaded.group, &loaded.pair, loaded.swap.as_deref());
        assert_eq!(again, file);
        let a = check_bg(&e.group, &e.pair).unwrap();
        let b = check_bg(&loaded.group, &loaded.pair).unwrap();
        assert_eq!(a.passes(), b.passes());
        assert_eq!(a.failures.len(), b.failures.len());
    }
}

#[test]
fn check_bg_pipeline() {
    let cat = run(&["catalog", "gamma_n", "--n", "1", "--c0", "1"], None);
    assert_eq!(cat.status.code(), Some(0));
    let file = stdout(&cat);
    let ok = run(&["check-bg"], Some(&file));
    assert_eq!(ok.status.code(), Some(0), "{}", stdout(&ok));
    assert!(stdout(&ok).contains("coboundary: pass"));

    let bad = run(&["check-bg", "--zero-b"], Some(&file));
    assert_eq!(bad.status.code(), Some(1));
    let out = stdout(&bad);
    assert!(out.contains("coboundary: fail"));
    assert!(out.contains("coboundary residue at label"));

    let unsolved = stdout(&run(&["catalog", "gamma_n", "--zero-b"], None));
    let solved = run(&["solve-b"], Some(&unsolved));
    assert_eq!(solved.status.code(), Some(0));
    assert_eq!(run(&["check-bg", "-"], Some(&stdout(&solved))).status.code(), Some(0));
}

#[test]
fn json_reports() {
    let file = stdout(&run(&["catalog", "gamma_n", "--n", "1"], None));
    let o = run(&["--format", "json", "check-bg", "--zero-b"], Some(&file));
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["status"], "fail");
    assert!(!v["failures"].as_array().unwrap().is_empty());
    assert!(!o.stderr.is_empty());

    let o = run(&["--format", "json", "center-relation", "--n", "2"], None);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["constant"], "1/16*h^2");
}

#[test]
fn q_commands() {
    let o = run(&["center-relation", "--n", "2"], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("1/16*h^2"));
    let o = run(&["star", "--n", "3", "Zb", "Z"], None);
    assert_eq!(stdout(&o).trim(), "(1)*Z*Zb");
    let o = run(&["center", "--n", "2", "Z*Zb"], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("central: pass"));
    let o = run(&["center", "--n", "3", "Z"], None);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn other_commands() {
    let file = stdout(&run(&["catalog", "z2_r3_linear", "--variant", "2"], None));
    let o = run(&["verify-poisson"], Some(&file));
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["cohomology", "--degree", "0", "--polydeg", "4"], Some(&file));
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("dimension 3"));

    let file = stdout(&run(&["catalog", "z2_constant", "--c", "2"], None));
    let o = run(&["pbw", "--word", "g1 x1", "--word", "x1 x2"], Some(&file));
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("confluence: pass"));
    assert!(out.contains("g1 x1 = (-1)*x1*g[1]"), "{out}");
}

#[test]
fn input_errors() {
    let o = run(&["check-bg"], Some("{\"conductor\": 3,\n \"dimension\": }"));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2 column"));

    let file = stdout(&run(&["catalog", "gamma_n"], None)).replace("\"-z - 1\"", "\"-q\"");
    let o = run(&["check-bg"], Some(&file));
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("generators[0]"));

    let file = stdout(&run(&["catalog", "gamma_n"], None));
    let o = run(&["--max-group-order", "3", "check-bg"], Some(&file));
    assert_eq!(o.status.code(), Some(2));

    let o = bin()
        .args(["check-bg"])
        .env("ORBIPOISSON_MAX_CONDUCTOR", "2")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .and_then(|mut c| {
            c.stdin.take().unwrap().write_all(file.as_bytes())?;
            c.wait_with_output()
        })
        .unwrap();
    assert_eq!(o.status.code(), Some(2));

    assert_eq!(run(&["catalog", "nonsense"], None).status.code(), Some(2));
    assert_eq!(run(&["star", "--n", "2", "Z +", "Z"], None).status.code(), Some(2));
}

#[test]
fn deterministic_output() {
    let file = stdout(&run(&["catalog", "gamma_n", "--n", "2", "--c0", "1 + z"], None));
    let a = run(&["check-bg", "--zero-b"], Some(&file));
    let b = run(&["check-bg", "--zero-b"], Some(&file));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(
        run(&["catalog", "gamma_n", "--n", "2"], None).stdout,
        run(&["catalog", "gamma_n", "--n", "2"], None).stdout
    );
}
