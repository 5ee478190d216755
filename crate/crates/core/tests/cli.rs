use std::process::{Command, Output};

use cycone::report::{AnalysisReport, SurveyRow};

fn cycone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cycone"))
        .args(args)
        .env_remove("CYCONE_WORKERS")
        .output()
        .expect("spawn cycone")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(cycone(&["analyze", "--split", "0,1,2"]).status.code(), Some(0));
    assert_eq!(cycone(&["selftest"]).status.code(), Some(0));
    assert_eq!(cycone(&["--help"]).status.code(), Some(0));
    assert_eq!(cycone(&["analyze"]).status.code(), Some(1));
    assert_eq!(cycone(&["analyze", "--split", "0,1"]).status.code(), Some(1));
    assert_eq!(cycone(&["analyze", "--named", "nope"]).status.code(), Some(1));
    assert_eq!(cycone(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn json_round_trips() {
    let o = cycone(&["analyze", "--named", "S2TP2(-1)", "--json"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let r: AnalysisReport = serde_json::from_str(&text).unwrap();
    assert_eq!(r.gamma, -9);
    let again = serde_json::to_string_pretty(&r).unwrap();
    assert_eq!(again.trim(), text.trim());
}

#[test]
fn output_is_deterministic() {
    let a = cycone(&["survey", "--emin=-2", "--emax=2", "--json"]);
    let b = cycone(&["survey", "--emin=-2", "--emax=2", "--json"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn worker_count_does_not_change_rows() {
    let one = cycone(&["survey", "--emin=-3", "--emax=3", "--tsv", "--workers", "1"]);
    let many = cycone(&["survey", "--emin=-3", "--emax=3", "--tsv", "--workers", "5"]);
    assert_eq!(one.stdout, many.stdout);
    let env = Command::new(env!("CARGO_BIN_EXE_cycone"))
        .args(["survey", "--emin=-3", "--emax=3", "--tsv"])
        .env("CYCONE_WORKERS", "3")
        .output()
        .unwrap();
    assert_eq!(one.stdout, env.stdout);
}

#[test]
fn survey_filters_compose() {
    let o = cycone(&["survey", "--emin=-4", "--emax=4", "--json", "--filter", "nef", "--filter", "c1=3"]);
    // one JSON object per line
    let rows: Vec<SurveyRow> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(!rows.is_empty());
    for r in &rows {
        assert_eq!(r.c1, 3);
        assert!(r.gamma >= -18);
    }
    assert!(rows.iter().any(|r| r.splitting_type == [0, 1, 2]));
}

#[test]
fn out_file_and_meta() {
    let dir = std::env::temp_dir().join(format!("cycone-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("r.tsv");
    let o = cycone(&["analyze", "--chern", "3,12", "--tsv", "--meta", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let meta: serde_json::Value = serde_json::from_slice(
        o.stderr.split(|b| *b == b'\n').find(|l| l.starts_with(b"{")).unwrap(),
    )
    .unwrap();
    assert!(meta.get("version").is_some());
    let body = std::fs::read_to_string(&path).unwrap();
    let row = body.lines().nth(1).unwrap();
    let cols: Vec<&str> = row.split('\t').collect();
    assert_eq!(&cols[1..6], ["3", "12", "-27", "0", "2"]);
    std::fs::remove_dir_all(dir).ok();
}
