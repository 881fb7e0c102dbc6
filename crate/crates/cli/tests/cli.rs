use std::process::{Command, Output};

fn fct(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fct")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn triangles() {
    let o = fct(&["triangle", "H", "--type", "A2", "-k", "1", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o).trim(),
        r#"{"k":1,"monomials":[[0,0,1],[1,0,1],[1,1,2],[2,2,1]],"n":2,"triangle":"H","type":"A2"}"#
    );
    assert_eq!(stdout(&fct(&["triangle", "F", "--type", "A1", "-k", "3"])).trim(), "1 + 3x + y");
    assert_eq!(stdout(&fct(&["triangle", "M", "--type", "A1", "-k", "1"])).trim(), "1 - y + xy");
    assert_eq!(stdout(&fct(&["triangle", "h", "--type", "a1xa1", "-k", "2"])).trim(), "4 + 4xy + x^2y^2");
}

#[test]
fn triangle_to_file() {
    let dir = std::env::temp_dir().join(format!("fct-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("m.tex");
    let o = fct(&["triangle", "M", "--type", "A2", "-k", "1", "--latex", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(&path).unwrap().starts_with("\\begin{tabular}"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_exit_codes() {
    assert_eq!(fct(&["verify", "h=f", "--type", "B2", "-k", "2"]).status.code(), Some(0));
    assert_eq!(fct(&["verify", "y1-nar", "--type", "G2", "-k", "2"]).status.code(), Some(0));
    assert_eq!(fct(&["verify", "dual", "--type", "A2", "-k", "2"]).status.code(), Some(2));
    assert_eq!(fct(&["verify", "h=g", "--type", "A2", "-k", "1"]).status.code(), Some(2));
    assert_eq!(fct(&["verify", "counts", "--type", "Q7", "-k", "1"]).status.code(), Some(2));
    assert_eq!(fct(&["verify", "lattice-nar", "--type", "A1xA2", "-k", "1"]).status.code(), Some(2));
    let quiet = fct(&["--quiet", "verify", "phi", "--type", "A2", "-k", "2"]);
    assert_eq!(quiet.status.code(), Some(0));
    assert!(quiet.stdout.is_empty());
}

#[test]
fn unknown_suite() {
    assert_eq!(fct(&["grid", "nightly"]).status.code(), Some(2));
}

#[test]
fn ehrhart_csv() {
    let o = fct(&["ehrhart", "--type", "A2", "-t", "4"]);
    assert_eq!(stdout(&o), "t,i,N\n4,0,1\n4,1,3\n4,2,1\n");
    let o = fct(&["ehrhart", "--type", "A1", "-k", "2"]);
    assert_eq!(stdout(&o), "t,i,N\n3,0,1\n3,1,1\n5,0,2\n5,1,1\n");
    assert_eq!(fct(&["ehrhart", "--type", "A1xA1", "-t", "3"]).status.code(), Some(2));
}

#[test]
fn dumps() {
    assert_eq!(stdout(&fct(&["dump", "nn", "--type", "A1", "-k", "2"])).trim(), "[[[],[]],[[0],[]],[[0],[0]]]");
    assert_eq!(
        stdout(&fct(&["dump", "f", "--type", "A1", "-k", "2"])).trim(),
        r#"{"f":[[0,0,1],[0,1,1],[1,0,2]]}"#
    );
    let nc = stdout(&fct(&["dump", "nc", "--type", "A2", "-k", "1"]));
    assert_eq!(nc.trim().matches("]],[[").count(), 4);
    let regions = stdout(&fct(&["dump", "regions", "--type", "A1", "-k", "1"]));
    assert!(regions.contains(r#""bounded":true"#));
}

#[test]
fn output_is_deterministic() {
    let a = fct(&["triangle", "M", "--type", "B3", "-k", "2", "--json"]);
    let b = fct(&["triangle", "M", "--type", "B3", "-k", "2", "--json"]);
    assert_eq!(a.stdout, b.stdout);
}
