use std::process::Command;

use qaudit::{run_with, AuditRunner, EXIT_FAIL, EXIT_OK, EXIT_USAGE};
use qaudit_core::audit::{AuditCheck, AuditConfig, AuditReport, ReportMetadata, Status};
use serde_json::Value;

/// Returns a fixed report with one check per requested status.
struct Stub(Vec<Status>);

impl AuditRunner for Stub {
    fn run(&self, cfg: &AuditConfig) -> qaudit_core::Result<AuditReport> {
        let checks = self
            .0
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let (measured, err) = match s {
                    Status::Pass => (0.0, 0.0),
                    Status::Inconclusive => (1.0, 1.0),
                    Status::Fail => (1.0, 0.0),
                };
                let c = AuditCheck::new(format!("stub/{i}"), "stub", measured, 0.0, 0.0, err);
                assert_eq!(c.status, *s);
                c
            })
            .collect();
        let meta = ReportMetadata {
            tool_version: "test".into(),
            seed: cfg.seed,
            timestamp_unix: 0,
            tol: cfg.tol,
            n_max: cfg.n_max,
            sample_count: cfg.sample_count,
        };
        AuditReport::new(meta, cfg.q_grid.clone(), checks)
    }
}

fn run_stub(args: &[&str], stub: &Stub) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("qaudit").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err, stub);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let (code, out, _) = run_stub(args, &Stub(vec![]));
    (code, out)
}

fn json_rows(text: &str) -> Vec<Value> {
    serde_json::from_str::<Value>(text)
        .unwrap()
        .as_array()
        .unwrap()
        .clone()
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

#[test]
fn exit_codes_follow_check_statuses() {
    let (code, out, err) = run_stub(&["audit"], &Stub(vec![Status::Pass, Status::Pass]));
    assert_eq!(code, EXIT_OK);
    assert!(err.contains("2 PASS, 0 FAIL, 0 INCONCLUSIVE"), "{err}");
    let report: AuditReport = serde_json::from_str(&out).unwrap();
    assert_eq!(report.checks.len(), 2);

    let (code, _, _) = run_stub(&["audit"], &Stub(vec![Status::Pass, Status::Fail]));
    assert_eq!(code, EXIT_FAIL);
    let (code, _, _) = run_stub(&["audit"], &Stub(vec![Status::Inconclusive]));
    assert_eq!(code, EXIT_FAIL);
}

#[test]
fn flags_reach_the_audit_config() {
    let (code, out, _) = run_stub(
        &[
            "audit", "--q", "0.3", "--q", "0.7", "--seed", "9", "--tol", "1e-9", "--n-max", "12",
        ],
        &Stub(vec![Status::Pass]),
    );
    assert_eq!(code, EXIT_OK);
    let report: AuditReport = serde_json::from_str(&out).unwrap();
    assert_eq!(report.qp_grid, vec![0.3, 0.7]);
    assert_eq!(report.metadata.seed, 9);
    assert_eq!(report.metadata.tol, 1e-9);
    assert_eq!(report.metadata.n_max, 12);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["frobnicate"][..],
        &["audit", "--q", "1.5"],
        &["audit", "--tol", "-1"],
        &["audit", "--format", "xml"],
        &["eval", "aq", "--q", "0.5"],
        &["eval", "aq", "--z", "1,2,3"],
        &["table", "limit-q1", "--q", "0.99", "--q", "0.9"],
    ] {
        let (code, _, err) = run_stub(args, &Stub(vec![]));
        assert_eq!(code, EXIT_USAGE, "{args:?}: {err}");
    }
    let (code, _, _) = run_stub(&["--help"], &Stub(vec![]));
    assert_eq!(code, EXIT_OK);
}

#[test]
fn eval_ramanujan_function() {
    let (code, out) = run_cli(&["eval", "aq", "--z", "1", "--q", "0.5"]);
    assert_eq!(code, EXIT_OK);
    let row = &json_rows(&out)[0];
    let v = row["value_re"].as_f64().unwrap();
    assert!((v - 0.160_763_8).abs() < 1e-7, "{v}");
    assert_eq!(row["value_im"].as_f64().unwrap(), 0.0);

    let (_, out) = run_cli(&["eval", "aq", "--z", "0", "--q", "0.5"]);
    assert_eq!(json_rows(&out)[0]["value_re"].as_f64().unwrap(), 1.0);

    let (code, out) = run_cli(&[
        "eval", "qpoch", "--z", "0.5", "--q", "0.5", "--format", "csv",
    ]);
    assert_eq!(code, EXIT_OK);
    let (header, rows) = csv_rows(&out);
    let i = header.iter().position(|h| h == "value_re").unwrap();
    let v: f64 = rows[0][i].parse().unwrap();
    assert!((v - 0.288_788_095_1).abs() < 1e-10);
}

#[test]
fn eval_brackets_approach_their_limits() {
    for target in ["im-bracket", "sw-bracket"] {
        let (code, out) = run_cli(&["eval", target, "--q", "0.5", "--n-max", "40", "--u", "2"]);
        assert_eq!(code, EXIT_OK);
        let row = &json_rows(&out)[0];
        let v = row["value"].as_f64().unwrap();
        let lim = row["limit"].as_f64().unwrap();
        assert!((v - lim).abs() < 1e-5 * lim.abs(), "{target}: {v} vs {lim}");
    }
}

#[test]
fn asymptotic_tables() {
    let (code, out) = run_cli(&["table", "asymptotic-im", "--q", "0.5"]);
    assert_eq!(code, EXIT_OK);
    let rows = json_rows(&out);
    assert_eq!(rows.len(), 10);
    assert_eq!(rows[0]["n"].as_u64().unwrap(), 4);
    assert_eq!(rows[9]["n"].as_u64().unwrap(), 40);
    assert!(rows.iter().all(|r| r["status"] == "PASS"));

    let (code, out) = run_cli(&["table", "asymptotic-sw", "--q", "0.5", "--n-max", "0"]);
    assert_eq!(code, EXIT_OK);
    let rows = json_rows(&out);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["status"], "PASS");
}

#[test]
fn limit_table_is_monotone() {
    let (code, out) = run_cli(&["table", "limit-q1", "--z", "1"]);
    assert_eq!(code, EXIT_OK);
    let errs: Vec<f64> = json_rows(&out)
        .iter()
        .map(|r| r["measured"].as_f64().unwrap())
        .collect();
    assert_eq!(errs.len(), 3);
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
}

#[test]
fn csv_and_json_carry_the_same_numbers() {
    for args in [
        &["table", "asymptotic-sw", "--q", "0.3"][..],
        &["table", "limit-q1", "--z", "0,2"],
        &["eval", "aq", "--z", "-3,0.5", "--q", "0.9"],
    ] {
        let (_, json) = run_cli(args);
        let mut csv_args = args.to_vec();
        csv_args.extend(["--format", "csv"]);
        let (_, csv) = run_cli(&csv_args);
        let rows = json_rows(&json);
        let (header, csv_rows) = csv_rows(&csv);
        assert_eq!(rows.len(), csv_rows.len());
        for (j, c) in rows.iter().zip(&csv_rows) {
            for (name, cell) in header.iter().zip(c) {
                match &j[name.as_str()] {
                    Value::Number(n) => {
                        assert_eq!(n.as_f64().unwrap(), cell.parse::<f64>().unwrap())
                    }
                    Value::String(s) => assert_eq!(s, cell),
                    other => panic!("unexpected {other}"),
                }
            }
        }
    }
}

#[test]
fn report_csv_matches_json() {
    let stub = Stub(vec![Status::Pass, Status::Fail, Status::Inconclusive]);
    let (_, json, _) = run_stub(&["audit"], &stub);
    let (_, csv, _) = run_stub(&["audit", "--format", "csv"], &stub);
    let report: AuditReport = serde_json::from_str(&json).unwrap();
    let (header, rows) = csv_rows(&csv);
    assert_eq!(
        header,
        [
            "id",
            "description",
            "measured",
            "expected",
            "tolerance",
            "status"
        ]
    );
    for (c, r) in report.checks.iter().zip(&rows) {
        assert_eq!(c.id, r[0]);
        assert_eq!(c.measured, r[2].parse::<f64>().unwrap());
        assert_eq!(c.status.to_string(), r[5]);
    }
}

#[test]
fn out_flag_writes_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("aq.csv");
    let p = path.to_str().unwrap();
    let (code, out) = run_cli(&[
        "eval", "aq", "--z", "1", "--q", "0.5", "--format", "csv", "--out", p,
    ]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("target,q,z_re"));

    let missing = dir.path().join("no/such/dir/x.json");
    let (code, _) = run_cli(&["eval", "aq", "--z", "1", "--out", missing.to_str().unwrap()]);
    assert_eq!(code, EXIT_FAIL);
}

#[test]
fn binary_runs_a_real_audit() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let run = Command::new(env!("CARGO_BIN_EXE_qaudit"))
        .args(["audit", "--q", "0.5", "--n-max", "8", "--out"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(String::from_utf8(run.stderr).unwrap().contains("2 FAIL"));
    let report: AuditReport =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let failing: Vec<&str> = report
        .checks
        .iter()
        .filter(|c| c.status != Status::Pass)
        .map(|c| c.id.as_str())
        .collect();
    // the A_q^2(u^-2) integral comes out at half its stated value
    assert_eq!(
        failing,
        ["im-integral/q=0.5/theorem", "q1-limit/z=-3/final"]
    );
    assert_eq!(run.status.code(), Some(EXIT_FAIL));

    let table = Command::new(env!("CARGO_BIN_EXE_qaudit"))
        .args(["table", "limit-q1"])
        .output()
        .unwrap();
    assert_eq!(table.status.code(), Some(EXIT_OK));
    assert!(String::from_utf8(table.stdout)
        .unwrap()
        .contains("\"measured\""));
}
