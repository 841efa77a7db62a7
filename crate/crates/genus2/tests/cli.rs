use std::path::PathBuf;
use std::process::{Command, Output};

fn genus2(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_genus2")).args(args).output().expect("binary runs")
}

fn corpus(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(rel).display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn temp(name: &str, text: &str) -> String {
    let p = std::env::temp_dir().join(format!("genus2-cli-{}-{name}", std::process::id()));
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn verify_fixture_relators() {
    let o = genus2(&["verify", &corpus("relators.mcg"), "--format", "records"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("relator label=X(0) identity=true ab=0 n=30 s=0 e=26 sigma=-18"));
    assert!(out.contains("label=matsumoto identity=true ab=0 n=6 s=2"));
}

#[test]
fn verify_single_letter_fails() {
    let f = temp("c1.mcg", "c1\n");
    assert_eq!(genus2(&["verify", &f]).status.code(), Some(1));
}

#[test]
fn replay_scripts() {
    let o = genus2(&["replay", &corpus("derivations/z.mcg")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("final Z(4) (12,4)"));
    let o = genus2(&["replay", &corpus("derivations/x.mcg"), "--format", "records"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("result passed=true n=18 s=6\n"));
}

#[test]
fn replay_illegal_swap() {
    let f = temp("bad.mcg", "start: c1 c2 c3\n~ commute @0\nfinal: c2 c1 c3 label=w\n");
    let o = genus2(&["replay", &f]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("illegal move"));
}

#[test]
fn decompose_commands() {
    let o = genus2(&["decompose", "26", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("result: unique"));
    let o = genus2(&["decompose", "18", "6", "--format", "records"]);
    let out = stdout(&o);
    assert!(out.contains("a=6,2 b=12,4 class_a=diffeo class_b=homeo verdict=admissible"));
    assert!(out.contains("a=4,3 b=14,3 class_a=diffeo class_b=homeo verdict=admissible"));
    assert!(stdout(&genus2(&["decompose", "0", "0"])).contains("indecomposable"));
    assert_eq!(genus2(&["decompose", "--", "-1", "2"]).status.code(), Some(2));
}

#[test]
fn registry_checks() {
    assert_eq!(genus2(&["registry-check"]).status.code(), Some(0));
    let std_text = std::fs::read_to_string(corpus("standard.reg")).unwrap();
    let nonsep = temp("nonsep.reg", &std_text.replace("d sep h=", "d nonsep h="));
    assert_ne!(std_text, std::fs::read_to_string(&nonsep).unwrap());
    let o = genus2(&["registry-check", "--registry", &nonsep]);
    assert_eq!(o.status.code(), Some(1));
    let no_l3: String = std_text.lines().filter(|l| !l.starts_with("L3:")).map(|l| format!("{l}\n")).collect();
    let o = genus2(&["registry-check", "--registry", &temp("nol3.reg", &no_l3)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("coverage"));
}

#[test]
fn out_flag_and_parse_errors() {
    let out = std::env::temp_dir().join(format!("genus2-cli-{}-out.txt", std::process::id()));
    let o = genus2(&["invariants", "26", "2", "--simply-connected", "--out", &out.display().to_string()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(std::fs::read_to_string(&out).unwrap().contains("3 CP2 # 19 CP2bar"));
    let f = temp("garbage.mcg", "c1 ( c2\n");
    assert_eq!(genus2(&["verify", &f]).status.code(), Some(2));
}
