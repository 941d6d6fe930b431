use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_genpolylog"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

const EXAMPLE: [&str; 10] = ["--p", "1", "--q", "1", "--a", "1.4", "--b", "1.2", "--z", "0.5"];

fn with_example<'a>(head: &[&'a str], tail: &[&'a str]) -> Vec<&'a str> {
    head.iter().chain(EXAMPLE.iter()).chain(tail.iter()).copied().collect()
}

#[test]
fn eval_prints_one_csv_row() {
    let out = run(&with_example(&["eval"], &[]));
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "route,re,im,abs_error_estimate,terms_or_evals");
    let cols: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(cols[0], "series");
    let value: f64 = cols[1].parse().unwrap();
    // C·Σ_{k≥1} z^k/((k+a)(k+b)) with C = 2.4·2.2, summed independently.
    let mut direct = 0.0;
    for k in 1..200 {
        let k = k as f64;
        direct += 0.5f64.powf(k) / ((k + 1.4) * (k + 1.2));
    }
    assert!((value - 2.4 * 2.2 * direct).abs() < 1e-12);
}

#[test]
fn eval_json_carries_the_manifest() {
    let out = run(&with_example(&["eval"], &["--format", "json", "--route", "single-integral"]));
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["manifest"]["command"], "eval");
    assert_eq!(doc["manifest"]["params"]["a"], 1.4);
    let rows = doc["results"]["values"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["route"], "single-integral");
    assert!(rows[0]["re"].as_f64().unwrap() > 0.67);
}

#[test]
fn complex_argument_parses() {
    let out = run(&["eval", "--p", "2", "--q", "1", "--a", "1", "--b", "1", "--z", "0.3-0.4i"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let row = stdout(&out).lines().nth(1).unwrap().to_owned();
    let im: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
    assert!(im < 0.0);
}

#[test]
fn out_flag_writes_the_file() {
    let path = std::env::temp_dir().join(format!("genpolylog-cli-{}.csv", std::process::id()));
    let path_str = path.to_str().unwrap();
    let out = run(&with_example(&["eval"], &["--out", path_str]));
    assert_eq!(out.status.code(), Some(0));
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert!(written.starts_with("route,re,im"));
}

#[test]
fn compare_all_routes_agree() {
    let out = run(&with_example(&["compare"], &[]));
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let (values, pairs) = text.split_once("\n\n").expect("two tables");
    assert_eq!(values.lines().count(), 7);
    assert_eq!(pairs.lines().count(), 1 + 15);
    assert!(pairs.lines().skip(1).all(|l| l.ends_with(",pass")));
}

#[test]
fn grid_over_z() {
    let out = run(&["grid", "--p", "1", "--q", "1", "--a", "1.4", "--b", "1.2", "--sweep", "z:0.1:0.5:0.1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 6);
    let values: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(values.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn grid_bounds_bracket_phi() {
    let out = run(&["grid", "--preset", "fig2", "--sweep", "x:0.1:0.9:0.2", "--quantity", "bounds"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    for line in stdout(&out).lines().skip(1) {
        let v: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert!(v[1] < v[2] && v[2] < v[3], "{line}");
    }
}

#[test]
fn verify_reports_gaps_and_summary() {
    let out = run(&["verify", "turan-psi", "--preset", "fig4", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let summary = &doc["results"]["summary"][0];
    assert_eq!(summary["verdict"], "pass");
    assert_eq!(doc["results"]["gaps"].as_array().unwrap().len() as u64, summary["points"].as_u64().unwrap());
    assert!(stderr(&out).contains("turan-psi: pass"));
}

#[test]
fn verify_with_custom_sweep() {
    let out = run(&["verify", "log-convexity", "--preset", "fig3", "--sweep", "p:0.5:1.5:0.25"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("log-convexity,5,"));
}

#[test]
fn failed_verdict_exits_5() {
    let out = run(&["verify", "cm", "--preset", "fig1", "--gap-tol", "-1"]);
    assert_eq!(out.status.code(), Some(5));
    assert!(stdout(&out).contains(",fail"));
}

#[test]
fn domain_errors_exit_2() {
    let small_shift = run(&["eval", "--p", "1", "--q", "1", "--a", "0.5", "--b", "1.2", "--z", "0.5", "--route", "single-integral"]);
    assert_eq!(small_shift.status.code(), Some(2));
    assert!(stderr(&small_shift).contains("a>1"));

    let outside_disc = run(&["eval", "--p", "1", "--q", "1", "--a", "1.4", "--b", "1.2", "--z", "1.5"]);
    assert_eq!(outside_disc.status.code(), Some(2));
}

#[test]
fn small_shifts_can_be_allowed() {
    let out = run(&[
        "eval", "--p", "1", "--q", "1", "--a", "0.5", "--b", "1.2", "--z", "0.5", "--route", "single-integral",
        "--allow-small-shifts",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["grid", "--p", "1", "--sweep", "x:0.1:0.2:0.1"]).status.code(), Some(2));
    assert_eq!(run(&["grid", "--preset", "fig2", "--sweep", "x:0.5:0.1:0.1"]).status.code(), Some(2));
}

#[test]
fn exhausted_budget_exits_3() {
    let out = run(&["eval", "--p", "1", "--q", "1", "--a", "1.4", "--b", "1.2", "--z", "0.999", "--max-terms", "16"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("did not converge"));
}

#[test]
fn lerch_through_every_route() {
    for route in ["series", "lerch-integral", "lambda-series", "lerch-kernel"] {
        let out = run(&["eval", "--s", "2", "--a", "1.5", "--z", "0.5", "--lambda", "-1", "--route", route]);
        assert_eq!(out.status.code(), Some(0), "{route}: {}", stderr(&out));
    }
}

#[test]
fn guide_transcript_matches() {
    let chapter = include_str!("../../../book/src/cli.md");
    let block = chapter
        .split("```text\n$ ")
        .nth(1)
        .and_then(|rest| rest.split("```").next())
        .expect("transcript block");
    let (command, expected) = block.split_once('\n').unwrap();
    let args: Vec<&str> = command.split_whitespace().skip(1).collect();
    let out = run(&args);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), expected);
}

#[test]
fn eval_unit_shifts_match_dilogarithm() {
    let out = run(&["eval", "--p", "1", "--q", "1", "--a", "1", "--b", "1", "--z", "0.5", "--route", "series", "--tol", "1e-15"]);
    assert_eq!(out.status.code(), Some(0));
    let value: f64 = stdout(&out).lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    // 4 Σ z^k/(k+1)² = 4 (Li₂(z)/z - 1), with Li₂(1/2) = π²/12 - ln²2 / 2.
    let li2 = std::f64::consts::PI.powi(2) / 12.0 - std::f64::consts::LN_2.powi(2) / 2.0;
    assert!((value - 4.0 * (2.0 * li2 - 1.0)).abs() < 1e-13);
}

#[test]
fn eval_at_zero_is_zero() {
    let out = run(&["eval", "--p", "1", "--q", "1", "--a", "1.4", "--b", "1.2", "--z", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("series,0.0000000000000000e0,0.0000000000000000e0"));
}

#[test]
fn grid_fig2_has_nineteen_rows() {
    let out = run(&["grid", "--preset", "fig2", "--sweep", "x:0.05:0.95:0.05", "--quantity", "bounds"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 1 + 19);
}

#[test]
fn grid_psi_decreases_in_p() {
    let out = run(&["grid", "--preset", "fig1", "--sweep", "p:0.1:5:0.1", "--quantity", "psi"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("p,psi"));
    let psi: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(psi.len(), 50);
    assert!(psi.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn compare_series_and_hypergeometric() {
    let out = run(&["compare", "--p", "2", "--q", "3", "--a", "1.2", "--b", "1.5", "--z", "0.7", "--route", "series,hypergeometric"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).ends_with(",pass\n"));
}

#[test]
fn compare_differences_shrink_with_tolerance() {
    let diff = |tol: &str| -> f64 {
        let out = run(&with_example(&["compare"], &["--route", "series,double-integral", "--tol", tol]));
        assert_eq!(out.status.code(), Some(0));
        let text = stdout(&out);
        text.lines().last().unwrap().split(',').nth(2).unwrap().parse().unwrap()
    };
    assert!(diff("1e-8") < diff("1e-4"));
}
