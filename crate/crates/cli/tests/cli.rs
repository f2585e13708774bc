use std::process::{Command, Output};

use bigeven::oracle;
use bigeven::Threshold;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bigeven"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    rdr.records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect()
}

#[test]
fn csv_row_at_thirty() {
    let out = stdout(&["table", "--k", "12", "--ell", "5", "--n-max", "30", "--format", "csv"]);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 31);
    let r = &rows[30];
    assert_eq!(r[0], "30");
    assert_eq!(r[1], "536470425;400476;11");
    assert_eq!(&r[2..8], ["536470425", "536470436", "400476", "400498", "536650272", "42274"]);
    assert_eq!(&r[9..], ["200249", "268435456"]);
}

#[test]
fn csv_header_is_fixed() {
    let out = stdout(&["table", "--k", "3", "--n-max", "2", "--format", "csv"]);
    assert_eq!(
        out.lines().next().unwrap(),
        "n,a_t,c,E,O,T,L,F,late_exists,avg_num,avg_den"
    );
}

#[test]
fn single_row_at_zero() {
    let out = stdout(&["table", "--k", "1", "--n-max", "0", "--format", "csv"]);
    let rows = csv_rows(&out);
    assert_eq!(rows, vec![vec!["0", "1", "1", "", "", "0", "1", "0", "0", "", ""]]);
}

#[test]
fn k2_row_four() {
    let rows = csv_rows(&stdout(&["table", "--k", "2", "--n-max", "4", "--format", "csv"]));
    assert_eq!(rows[4][1], "7;1");
    assert_eq!(rows[4][2], "7");
}

#[test]
fn text_output_has_metadata_line() {
    let out = stdout(&["table", "--k", "2", "--n-max", "4"]);
    assert!(out.starts_with("# k=2 ell=0 engine=exact version="), "{out}");
    assert_eq!(out.lines().count(), 7);
}

#[test]
fn csv_and_json_agree() {
    let base = ["table", "--k", "4", "--ell", "2", "--n-max", "40"];
    let csv_out = stdout(&[&base[..], &["--format", "csv"]].concat());
    let json_out = stdout(&[&base[..], &["--format", "json"]].concat());
    let json: serde_json::Value = serde_json::from_str(&json_out).unwrap();
    assert_eq!(json["meta"]["engine"], "exact");
    let rows = json["rows"].as_array().unwrap();
    let csv = csv_rows(&csv_out);
    assert_eq!(rows.len(), csv.len());
    let s = |v: &serde_json::Value| v.as_str().map(String::from).unwrap_or_default();
    for (j, c) in rows.iter().zip(&csv) {
        let a: Vec<String> = j["a"].as_array().unwrap().iter().map(s).collect();
        let expected = vec![
            j["n"].to_string(),
            a.join(";"),
            s(&j["c"]),
            s(&j["even"]),
            s(&j["odd"]),
            s(&j["total"]),
            s(&j["late"]),
            s(&j["first_at"]),
            s(&j["late_exists"]),
            j["avg"].get("num").map(s).unwrap_or_default(),
            j["avg"].get("den").map(s).unwrap_or_default(),
        ];
        assert_eq!(&expected, c);
    }
}

#[test]
fn json_counts_are_strings() {
    let out = stdout(&["table", "--k", "1", "--n-max", "80", "--format", "json"]);
    let json: serde_json::Value = serde_json::from_str(&out).unwrap();
    let last = &json["rows"][80];
    assert!(last["c"].is_string());
    assert!(last["a"][0].is_string());
    // every large even part at k=1 has a partner composition of opposite parity
    assert_eq!(last["even"], "302231454903657293676544");
}

#[test]
fn output_is_deterministic() {
    let args = ["table", "--k", "5", "--ell", "3", "--n-max", "25", "--format", "json"];
    assert_eq!(stdout(&args), stdout(&args));
}

#[test]
fn oracle_engine_matches_exact() {
    let base = ["table", "--k", "3", "--ell", "2", "--n-max", "16", "--format", "csv"];
    let exact = csv_rows(&stdout(&base));
    let oracle = csv_rows(&stdout(&[&base[..], &["--engine", "oracle"]].concat()));
    assert_eq!(exact, oracle);
}

#[test]
fn numeric_engine_matches_exact_where_representable() {
    let base = ["table", "--k", "6", "--ell", "1", "--n-max", "40", "--format", "csv"];
    let exact = csv_rows(&stdout(&base));
    let numeric = csv_rows(&stdout(&[&base[..], &["--engine", "numeric"]].concat()));
    for (e, n) in exact.iter().zip(&numeric) {
        assert_eq!(n[1], "");
        assert_eq!(e[0], n[0]);
        assert_eq!(e[2..], n[2..], "n={}", e[0]);
    }
}

#[test]
fn poly_values() {
    assert_eq!(stdout(&["poly", "--k", "2", "--n", "4"]), "7 + y\n");
    assert_eq!(stdout(&["poly", "--k", "9", "--n", "0"]), "1\n");
    let out = stdout(&["poly", "--k", "2", "--n", "9"]);
    let rep = oracle::aggregate(9, Threshold::new(2).unwrap(), 0).unwrap();
    let expected: Vec<String> = rep
        .histogram
        .iter()
        .enumerate()
        .map(|(t, c)| match t {
            0 => c.to_string(),
            1 => format!("{c}*y"),
            _ => format!("{c}*y^{t}"),
        })
        .collect();
    assert_eq!(out.trim(), expected.join(" + "));
    assert_eq!(rep.histogram.iter().sum::<u64>(), 256);
}

#[test]
fn closedform_avoid_k12() {
    let out = stdout(&["closedform", "--k", "12", "--target", "avoid"]);
    assert!(out.contains("poles: 14"), "{out}");
    assert!(out.contains("simple poles"));
    let line = out
        .lines()
        .find(|l| l.trim_start().starts_with("30 "))
        .expect("spot check at n=30");
    assert!(line.contains("536470425") && line.ends_with("yes"), "{line}");
}

#[test]
fn closedform_total_has_one_double_pole() {
    let out = stdout(&["closedform", "--k", "7", "--target", "total"]);
    assert!(out.contains("poles: 2"), "{out}");
    let poles: Vec<(f64, u32)> = out
        .lines()
        .map(|l| l.split_whitespace().collect::<Vec<_>>())
        .filter(|t| t.len() == 4 && t[1].ends_with('i'))
        .map(|t| (t[0].parse().unwrap(), t[3].parse().unwrap()))
        .collect();
    assert_eq!(poles, vec![(0.5, 2), (-1.0, 1)], "{out}");
    assert!(!out.contains("NO"));
}

#[test]
fn closedform_k1_is_golden_ratio() {
    let out = stdout(&["closedform", "--k", "1", "--target", "avoid"]);
    assert!(out.contains("kernel: (1 - x^2) / (1 - x - x^2)"), "{out}");
    assert!(out.contains("+6.180339887498948e-1"), "{out}");
    assert!(!out.contains("NO"));
}

#[test]
fn closedform_other_targets() {
    for target in ["parity", "late", "first"] {
        let out = stdout(&["closedform", "--k", "12", "--ell", "5", "--target", target]);
        assert!(out.contains("spot check"), "{out}");
        assert!(!out.contains(" NO"), "{target}: {out}");
    }
}

#[test]
fn verify_exit_codes() {
    let ok = run(&["verify", "--k-max", "6", "--n-max", "18", "--ell-max", "4"]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stdout));
    let degenerate = run(&["verify", "--k-max", "1", "--n-max", "0"]);
    assert_eq!(degenerate.status.code(), Some(0));
    let table = String::from_utf8(degenerate.stdout).unwrap();
    assert_eq!(table.lines().count(), 2);
}

#[test]
fn verify_catches_shifted_delta() {
    for k in ["1", "4"] {
        let out = run(&["verify", "--k-max", k, "--n-max", "12", "--ell-max", "1", "--mutate-delta"]);
        assert_eq!(out.status.code(), Some(1));
        let err = String::from_utf8(out.stderr).unwrap();
        assert!(err.contains("k=1") && err.contains("n=2"), "{err}");
    }
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["table"][..],
        &["table", "--k", "0"],
        &["table", "--k", "3", "--format", "xml"],
        &["table", "--k", "3", "--engine", "guess"],
        &["closedform", "--k", "3", "--target", "nothing"],
        &["nonsense"],
        &["table", "--k", "3", "--n-max", "26", "--engine", "oracle"],
        &["verify", "--k-max", "2", "--n-max", "30"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}
