use std::process::{Command, Output};

fn vincycle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vincycle"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn count_reversal_pair_at_six() {
    let o = vincycle(&[
        "count",
        "--set",
        "[1~2~3] [3~2~1]",
        "--n",
        "6",
        "--format",
        "csv",
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "n,count,elapsed_ms\n6,16,\n");
}

#[test]
fn fully_bonded_pair_is_unavoidable() {
    let o = vincycle(&["count", "--set", "[1~2]", "--n", "5", "--format", "csv"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "n,count,elapsed_ms\n5,0,\n");
}

#[test]
fn range_syntaxes_agree() {
    let a = vincycle(&[
        "count",
        "--set",
        "[1~3,2,4]",
        "--n",
        "1..8",
        "--format",
        "csv",
    ]);
    let b = vincycle(&[
        "count",
        "--set",
        "[1~3,2,4]",
        "--n",
        "1..=8",
        "--format",
        "csv",
    ]);
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).ends_with("8,429,\n"));
}

#[test]
fn malformed_pattern_exits_2() {
    let o = vincycle(&["count", "--set", "[1~1]", "--n", "5"]);
    assert_eq!(o.status.code(), Some(2));
    let o = vincycle(&["count", "--set", "[1~2]", "--n", "0..3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn exhausted_budget_exits_3_after_partial_table() {
    let o = vincycle(&[
        "count",
        "--set",
        "[1~3,2,4]",
        "--n",
        "1..10",
        "--budget-nodes",
        "1000",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(3));
    let out = stdout(&o);
    assert!(out.starts_with("n,count,elapsed_ms\n1,1,\n"), "{out}");
    assert!(!out.contains("\n10,"));
}

#[test]
fn small_reference_table_passes() {
    let o = vincycle(&["table", "1", "--n-max", "3"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().filter(|l| l.starts_with("PASS")).count(), 9);
    assert!(!out.contains("FAIL"));
}

#[test]
fn long_table_rows_need_extended() {
    let o = vincycle(&["table", "2", "--n-max", "11"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn csv_and_json_are_reproducible() {
    for fmt in ["csv", "json"] {
        let args = [
            "count",
            "--set",
            "[1~4,2,3]",
            "--n",
            "3..9",
            "--refine",
            "predecessor_of_n",
            "--format",
            fmt,
        ];
        let a = vincycle(&args);
        let b = vincycle(&args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{fmt}");
    }
}

#[test]
fn output_does_not_depend_on_jobs_or_path() {
    let base = [
        "count",
        "--set",
        "[1~2~3] [2~3~1]",
        "--n",
        "1..10",
        "--format",
        "json",
    ];
    let reference = stdout(&vincycle(&base));
    for extra in [
        &["--jobs", "1"][..],
        &["--jobs", "3"],
        &["--sequential"],
        &["--no-prune"],
    ] {
        let mut args = base.to_vec();
        args.extend_from_slice(extra);
        assert_eq!(stdout(&vincycle(&args)), reference, "{extra:?}");
    }
}

#[test]
fn timings_are_opt_in() {
    let o = vincycle(&["count", "--set", "[1~2~3]", "--n", "4", "--format", "json"]);
    assert!(!stdout(&o).contains("elapsed_ms"));
    let o = vincycle(&[
        "count",
        "--set",
        "[1~2~3]",
        "--n",
        "4",
        "--format",
        "json",
        "--timings",
    ]);
    assert!(stdout(&o).contains("elapsed_ms"));
}

#[test]
fn refined_json_has_statistic() {
    let o = vincycle(&[
        "count",
        "--set",
        "[1~4,3,2]",
        "--n",
        "6",
        "--refine",
        "zeil_reverse",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let r = &v[0]["refinement"];
    assert_eq!(r["statistic"], "zeil_reverse");
    let total: u64 = r["counts"]
        .as_object()
        .unwrap()
        .values()
        .map(|c| c.as_str().unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(v[0]["count"], total.to_string());
}

#[test]
fn unknown_statistic_exits_2() {
    let o = vincycle(&[
        "count",
        "--set",
        "[1~2~3]",
        "--n",
        "5",
        "--refine",
        "inversions",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn enumerate_lists_lexicographically() {
    let o = vincycle(&["enumerate", "--set", "[1~2~3] [3~2~1]", "--n", "6"]);
    let lines: Vec<String> = stdout(&o).lines().map(str::to_string).collect();
    assert_eq!(lines.len(), 16);
    let mut sorted = lines.clone();
    sorted.sort();
    assert_eq!(lines, sorted);
    assert_eq!(lines[0], "[1,3,2,5,4,6]");
}

#[test]
fn formula_catalan() {
    let o = vincycle(&["formula", "catalan", "--n", "1..6", "--format", "csv"]);
    assert_eq!(
        stdout(&o),
        "n,count,elapsed_ms\n1,1,\n2,2,\n3,5,\n4,14,\n5,42,\n6,132,\n"
    );
    let o = vincycle(&["formula", "no-such-sequence", "--n", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bijection_checks_pass() {
    for (t, n) in [("3.6", "4"), ("4.4", "7"), ("4.5", "7")] {
        let o = vincycle(&["bijection-check", "--theorem", t, "--n", n]);
        assert!(o.status.success(), "{t}: {}", stdout(&o));
        assert!(!stdout(&o).contains("FAIL"));
    }
    let o = vincycle(&["bijection-check", "--theorem", "9.9"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unavoidable_pi_set_and_classification() {
    let o = vincycle(&[
        "unavoidable",
        "--pi",
        "1,3",
        "--horizon",
        "10",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["empty_from"], 3);
    assert_eq!(v["evidence"], "horizon-relative");

    let o = vincycle(&["unavoidable", "--classify", "3", "--horizon", "7"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["minimal_sets"].as_array().unwrap().len(), 6);
    assert_eq!(v["conjecture_5_3_consistent"], true);
}

#[test]
fn witnesses_verify() {
    let o = vincycle(&[
        "witness", "blowup", "--pi", "1342", "--m", "4", "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verified"], true);
    assert_eq!(v["witness"], "[1,9,13,5,2,10,14,6,3,11,15,7,4,12,16,8]");

    let o = vincycle(&[
        "witness",
        "minus-one",
        "--i",
        "2",
        "--k",
        "4",
        "--excluded",
        "[2~1~4~3]",
        "--n",
        "12",
    ]);
    assert!(o.status.success(), "{}", stdout(&o));
    let o = vincycle(&[
        "witness",
        "minus-one",
        "--i",
        "2",
        "--k",
        "4",
        "--excluded",
        "[1~2~3~4]",
        "--n",
        "12",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_suite_small() {
    let o = vincycle(&["verify", "formulas", "--n-max", "7"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let o = vincycle(&["verify", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));
}
