use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kneadzeta"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_of(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).expect("stdout is JSON")
}

#[test]
fn generate_prints_the_example_vector() {
    let o = run(&["comb", "generate", "--nu", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "{\"expanding\":true,\"rho\":[7,3,4,5,6,3,2,0],\"vu\":true}\n");
}

#[test]
fn sft_counts_of_the_golden_mean_shift() {
    let o = run(&["zeta", "sft", "--matrix", "0,1;1,1", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_of(&o);
    assert_eq!(v["counts"], serde_json::json!([1, 3, 4, 7]));
    assert_eq!(v["zeta"]["coeffs"], serde_json::json!(["1", "1", "2", "3", "5"]));
    assert!(v.as_object().unwrap().contains_key("phi_factors"));
}

#[test]
fn validate_reports_the_failing_condition() {
    let o = run(&["comb", "validate", "--rho", "0,3,3,2,0"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json_of(&o)["reason"], "adjacent equal entries at 1");
    assert!(String::from_utf8_lossy(&o.stderr).contains("adjacent equal entries at 1"));

    let o = run(&["comb", "validate", "--rho", "0,3,4,7,6,5,2,1,0"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json_of(&o);
    assert_eq!(v["induced"], serde_json::json!([0, 2, 3, 1, 0]));
    assert_eq!(v["marked"], serde_json::json!([0, 1, 3, 7, 8]));

    let o = run(&["comb", "validate", "--rho", "5,2,3,4,2,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_of(&o)["dominant"], 3);
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["comb", "generate", "--nu", "2", "--order", "3"],
        vec!["comb", "validate", "--rho", "0,x"],
        vec!["zeta", "sft", "--matrix", "0,1;1", "--n", "3"],
        vec!["fib", "check", "--format", "csv", "--tol", "-1"],
        vec!["comb", "generate", "--nu", "2", "--format", "csv"],
        vec!["bogus"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn output_is_deterministic_with_sorted_keys() {
    let args = ["knead", "det", "--rho", "0,2,3,1,0", "--order", "16"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.stdout, b.stdout);
    let v = json_of(&a);
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    let text = stdout(&a);
    let positions: Vec<usize> = keys.iter().map(|k| text.find(&format!("\"{k}\"")).unwrap()).collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(v["rational"]["num"], serde_json::json!(["1", "-1", "-1"]));
    assert_eq!(v["rational"]["den"], serde_json::json!(["1", "0", "0", "-1"]));
}

#[test]
fn mt_check_on_the_full_tent() {
    let o = run(&["zeta", "mt-check", "--rho", "0,2,0"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_of(&o);
    assert_eq!(v["phi_factors"], serde_json::json!([1]));
    assert_eq!(v["counts"], serde_json::json!([2, 4, 8, 16, 32, 64, 128, 256]));
    let o = run(&["zeta", "mt-check", "--rho", "0,1,2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn closed_form_counts() {
    let o = run(&["zeta", "closed-form", "--nu", "2", "--n", "6"]);
    assert_eq!(json_of(&o)["counts"], serde_json::json!([1, 5, 7, 9, 11, 23]));
}

#[test]
fn cubic_sweep_is_csv_by_default() {
    let o = run(&["cubic", "sweep", "--from", "1", "--to", "1.2", "--steps", "2", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, ["s", "critical_value", "alpha", "beta", "N1", "N2", "N3", "N4"]);
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(&rows[0][1], "-1");
    for r in &rows {
        assert_eq!(r.iter().skip(4).collect::<Vec<_>>(), ["1", "5", "7", "9"]);
    }
}

#[test]
fn cubic_report_identities() {
    let o = run(&["cubic", "report", "--s", "6/5", "--n", "4", "--depth", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_of(&o);
    for (_, ok) in v["identities"].as_object().unwrap() {
        assert_eq!(ok, &Value::Bool(true));
    }
    assert_eq!(v["s"], "6/5");
    assert_eq!(v["pieces"]["count"], 8);
    assert_eq!(v["counts_match_closed_form"], true);
}

#[test]
fn fib_check_writes_csv_to_a_file() {
    let dir = std::env::temp_dir().join(format!("kneadzeta-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("fib.csv");
    let o = run(&["fib", "check", "--kmax", "6", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,nu,C,residual,one_minus_C");
    assert_eq!(lines.len(), 8);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn fib_check_rejects_an_unvalidated_slope() {
    let o = run(&["fib", "check", "--lambda", "1.7292119317087213", "--kmax", "6"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["fib", "check", "--lambda", "1.7292119317087213", "--kmax", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_of(&o)["levels"][1]["m"], serde_json::json!(["[c_2, c_5]", "[c_4, c_1]"]));
}

#[test]
fn find_lambda_round_trips_through_check() {
    let o = run(&["fib", "find-lambda", "--depth", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_of(&o);
    let decimal = v["decimal"].as_str().unwrap().to_string();
    let o = run(&["fib", "check", "--lambda", &decimal, "--kmax", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(json_of(&o)["structure"]["orbit_order"], true);
}

#[test]
fn detect_period_certificate() {
    let o = run(&["series", "detect-period", "--coeffs", "5,1,2,1,2,1,2"]);
    let v = json_of(&o);
    assert_eq!(v["certificate"]["preperiod"], 1);
    assert_eq!(v["certificate"]["period"], 2);
    let o = run(&["series", "detect-period", "--coeffs", "1,2,3,4,5,6"]);
    assert_eq!(json_of(&o)["certificate"], Value::Null);
}

#[test]
fn unimodal_and_orbit_subcommands() {
    let o = run(&["knead", "unimodal", "--rho", "0,2,3,1,0", "--order", "12"]);
    let v = json_of(&o);
    assert_eq!(v["periodicity"]["period"], 3);
    let o = run(&["comb", "orbit", "--rho", "0,2,3,1,0", "--n", "3"]);
    let v = json_of(&o);
    assert_eq!(v["periodic"]["orbits"], serde_json::json!([["1", "2", "3"]]));
    assert_eq!(v["turning"], serde_json::json!([2]));
}
