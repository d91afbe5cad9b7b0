use std::process::{Command, Output};

use serde_json::Value;

fn csemi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_csemi")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn hilbert_reports_basis_size() {
    let out = csemi(&["hilbert", "--rays", "13,1;1,3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["size"], 15);
    assert_eq!(v["hilbert_basis"].as_array().unwrap().len(), 15);
}

#[test]
fn count_csv_has_fixed_columns() {
    let out = csemi(&["count", "--rays", "1,0;0,1", "--max-genus", "4", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "genus,count,ratio,fib_ratio");
    assert_eq!(lines[1], "0,1,,");
    assert_eq!(lines[3], "2,7,3.5,0.428571");
    assert_eq!(lines.len(), 6);
}

#[test]
fn count_audit_agrees() {
    let out = csemi(&["count", "--rays", "3,1;1,2", "--max-genus", "4", "--audit", "--keep"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"agrees\": true"));
}

#[test]
fn exhausted_budget_emits_partial_report() {
    let out = csemi(&["count", "--rays", "1,0;0,1", "--max-genus", "9", "--budget", "50"]);
    assert_eq!(out.status.code(), Some(4));
    let v = json(&out);
    assert_eq!(v["partial"], true);
    let counts: Vec<u64> = v["rows"].as_array().unwrap().iter().map(|r| r["count"].as_u64().unwrap()).collect();
    assert_eq!(counts, [1, 2, 7, 23, 71]);
}

#[test]
fn bad_input_exits_with_two() {
    for args in [
        &["count", "--rays", "1,-1;0,1", "--max-genus", "2"][..],
        &["count", "--rays", "1,0;0,1", "--order", "1,0;0,1;1,1", "--max-genus", "2"],
        &["count", "--rays", "1,0;0,1", "--max-genus", "2", "--workers", "0"],
        &["show", "--rays", "1,0;0,1", "--gaps", "2,0"],
        &["family", "two-gen", "4", "6"],
        &["count", "--max-genus", "2"],
    ] {
        assert_eq!(csemi(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn wilf_walk_holds() {
    let out = csemi(&[
        "wilf-walk", "--rays", "13,1;1,3", "--max-genus", "20", "--seeds", "1,2", "--orders", "random:3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["all_hold"], true);

    let out = csemi(&["wilf-walk", "--rays", "1,0;0,1", "--max-genus", "5", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("order,seed,genus,removed,e,n,g,frobenius_number,wilf_holds"));
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn min_edim_table() {
    let out = csemi(&["min-edim", "--rays", "3,1;1,2", "--max-genus", "5", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let edims: Vec<&str> = text.lines().skip(1).map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(edims, ["4", "5", "4", "5", "4", "4"]);
}

#[test]
fn family_matches_closed_form() {
    let out = csemi(&["family", "two-gen-box", "3", "5", "2", "--audit"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["matches"], true);
    assert_eq!(v["oracle_agrees"], true);
    assert_eq!(v["wilf"]["holds"], true);
}

#[test]
fn show_round_trips_through_a_file() {
    let dir = std::env::temp_dir().join(format!("csemi-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("s.json");
    let path = path.to_str().unwrap();
    let first = csemi(&["show", "--rays", "3,1;1,2", "--gaps", "1,1;2,1", "--out", path]);
    assert_eq!(first.status.code(), Some(0), "{}", String::from_utf8_lossy(&first.stderr));
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let again = csemi(&["show", "--input", path]);
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(json(&again), saved);
    assert_eq!(saved["genus"], 2);
    std::fs::remove_dir_all(&dir).unwrap();
}
