use std::path::PathBuf;
use std::process::{Command, Output};

use camcom_core::camcom::uncapped;
use camcom_core::divisor::RoundingRule;
use camcom_core::model::{load_roster_str, ApportionmentProblem};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn camcom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_camcom"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

/// Error runs: nonzero exit, empty stdout, one `error: ` line on stderr.
fn assert_diagnostic(out: &Output, needle: &str) {
    assert!(!out.status.success());
    assert!(out.stdout.is_empty());
    let err = String::from_utf8_lossy(&out.stderr);
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with("error: "), "{err}");
    assert!(err.contains(needle), "{err}");
}

/// `code -> last column` from the CSV rendering, skipping `#` lines.
fn csv_rows(text: &str) -> Vec<Vec<String>> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    r.records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect()
}

fn seat_column(text: &str) -> Vec<u32> {
    csv_rows(text)
        .iter()
        .filter(|r| r[0] != "Sum")
        .map(|r| r.last().unwrap().parse().unwrap())
        .collect()
}

#[test]
fn apportion_at_one_shows_seats_divisor_and_range() {
    let text = stdout(&camcom(&[
        "apportion",
        "--builtin",
        "eu27",
        "--exponent",
        "1",
    ]));
    let de = text.lines().find(|l| l.starts_with("DE ")).unwrap();
    assert!(de.ends_with(" 104"), "{de}");
    assert!(text.contains("divisor: min=829724.5435 max=832259.7500 nice=830000"));
    assert!(text.contains("exponent-range: lower=0.9956 upper=1.0010 nice=1"));
}

#[test]
fn apportion_extremes() {
    let hi = stdout(&camcom(&[
        "apportion",
        "--builtin",
        "eu27",
        "--exponent",
        "27.5",
        "--format",
        "csv",
    ]));
    let seats = seat_column(&hi);
    assert_eq!(seats[0], 595);
    assert!(seats[1..].iter().all(|&x| x == 6));
    let lo = stdout(&camcom(&[
        "apportion",
        "--builtin",
        "eu27",
        "--exponent",
        "0.01",
        "--format",
        "csv",
    ]));
    let seats = seat_column(&lo);
    assert_eq!(seats, [vec![28; 22], vec![27; 5]].concat());
}

#[test]
fn apportion_with_cap_and_other_rules() {
    let text = stdout(&camcom(&[
        "apportion",
        "--builtin",
        "eu27",
        "--cap",
        "96",
        "--format",
        "csv",
    ]));
    assert_eq!(seat_column(&text)[..4], [96, 85, 81, 79]);
    assert!(text.contains("# capped: states=DE"));
    // Same house under the shifted standard and downward signposts.
    let up = seat_column(&stdout(&camcom(&[
        "apportion",
        "--builtin",
        "eu27",
        "--format",
        "csv",
    ])));
    let std = seat_column(&stdout(&camcom(&[
        "apportion",
        "--builtin",
        "eu27",
        "--rule",
        "std",
        "--base",
        "5",
        "--format",
        "csv",
    ])));
    assert_eq!(up.iter().sum::<u32>(), 751);
    assert_eq!(std.iter().sum::<u32>(), 751);
}

#[test]
fn solve_lists_both_solutions_and_picks() {
    let text = stdout(&camcom(&["solve", "--builtin", "eu27"]));
    assert!(text.contains("x(0.9) exponent-range: lower=0.8999 upper=0.9035 nice=0.9"));
    assert!(text.contains("x(0.91) exponent-range: lower=0.9036 upper=0.9109 nice=0.91"));
    assert!(text.contains("x(0.9) divisor: min=146940.9336 max=146975.9406 nice=146960"));
    assert!(text.contains("x(0.91) degressive: seats=false quotients=true"));

    let small = stdout(&camcom(&[
        "solve",
        "--builtin",
        "eu27",
        "--pick",
        "smallest",
    ]));
    assert!(small.contains("x(0.9)") && !small.contains("x(0.91)"));
    let large = stdout(&camcom(&[
        "solve",
        "--builtin",
        "eu27",
        "--pick",
        "largest",
        "--format",
        "csv",
    ]));
    assert!(large.contains("x(0.91)") && !large.contains("x(0.9) "));
    assert_eq!(seat_column(&large)[..2], [96, 79]);
}

#[test]
fn solve_reports_slack_cap() {
    let path = scratch(
        "slack.csv",
        "code,name,population\nA,Alpha,300\nB,Beta,200\nC,Gamma,100\n",
    );
    let text = stdout(&camcom(&[
        "solve",
        "--roster",
        path.to_str().unwrap(),
        "--house",
        "24",
        "--base",
        "1",
        "--cap",
        "20",
    ]));
    assert!(text.contains("cap not binding"));
    assert!(text.lines().nth(1).unwrap().ends_with("CC"));
}

#[test]
fn table_reproduces_comparison_columns() {
    let text = stdout(&camcom(&[
        "table",
        "--builtin",
        "eu27",
        "--columns",
        "index:0.9,camcom,power:0.91,power:0.9",
        "--format",
        "csv",
    ]));
    let rows = csv_rows(&text);
    assert_eq!(
        rows[0],
        ["DE", "Germany", "81802257", "13227834.7", "96", "96", "96"]
    );
    let it = rows.iter().find(|r| r[0] == "IT").unwrap();
    assert_eq!(it[3], "10058816.8");
    let sum = rows.last().unwrap();
    assert_eq!(sum[..], ["Sum", "", "501103425", "", "751", "751", "751"]);

    let default = stdout(&camcom(&["table", "--builtin", "eu27"]));
    let header = default.lines().nth(1).unwrap();
    let names: Vec<&str> = header.split_whitespace().collect();
    assert_eq!(
        names,
        [
            "code",
            "name",
            "population",
            "Popn^0.91",
            "Popn^0.9",
            "CC",
            "Par.",
            "x(0.91)",
            "x(0.9)",
            "Now"
        ]
    );
    assert!(default
        .lines()
        .any(|l| l.starts_with("DE ") && l.contains("15871442.9")));
}

#[test]
fn single_column_table() {
    let text = stdout(&camcom(&[
        "table",
        "--builtin",
        "eu27",
        "--columns",
        "camcom",
        "--format",
        "csv",
    ]));
    let rows = csv_rows(&text);
    assert!(rows.iter().all(|r| r.len() == 4));
}

#[test]
fn static_columns_need_the_builtin_roster() {
    let path = scratch(
        "three.csv",
        "code,name,population\nA,Alpha,300\nB,Beta,200\nC,Gamma,100\n",
    );
    let out = camcom(&[
        "table",
        "--roster",
        path.to_str().unwrap(),
        "--columns",
        "statusquo",
    ]);
    assert_diagnostic(&out, "builtin EU27");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn formats_carry_the_same_numbers() {
    let args = ["apportion", "--builtin", "eu27", "--exponent", "0.9"];
    let text = stdout(&camcom(&args));
    let csv = stdout(&camcom(&[&args[..], &["--format", "csv"]].concat()));
    let records = stdout(&camcom(&[&args[..], &["--format", "records"]].concat()));

    let csv_states: Vec<Vec<String>> = csv_rows(&csv)
        .into_iter()
        .filter(|r| r[0] != "Sum")
        .collect();
    let json: Vec<Value> = records
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let json_states: Vec<&Value> = json.iter().filter(|v| v["record"] == "state").collect();
    assert_eq!(csv_states.len(), 27);
    assert_eq!(json_states.len(), 27);
    for (row, rec) in csv_states.iter().zip(&json_states) {
        assert_eq!(rec["code"], row[0].as_str());
        assert_eq!(rec["population"].to_string(), row[2]);
        assert_eq!(
            rec["quotient"].as_f64().unwrap(),
            row[3].parse::<f64>().unwrap()
        );
        assert_eq!(rec["seats"].to_string(), row[4]);
        let line = text
            .lines()
            .find(|l| l.starts_with(&format!("{} ", row[0])))
            .unwrap();
        let cells: Vec<&str> = line.split_whitespace().collect();
        assert_eq!(
            cells[cells.len() - 3..],
            [row[2].as_str(), row[3].as_str(), row[4].as_str()]
        );
    }
    let summary = json.iter().find(|v| v["record"] == "summary").unwrap();
    assert_eq!(summary["notes"][0]["nice"], "146960");
    assert!(csv.contains("# divisor: min=146940.9336 max=146975.9406 nice=146960"));
    assert!(text.contains("divisor: min=146940.9336 max=146975.9406 nice=146960"));
}

#[test]
fn csv_round_trips_on_random_rosters() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    for case in 0..40 {
        let n = rng.gen_range(2..=12);
        let mut body = String::from("code,name,population\n");
        for i in 0..n {
            body += &format!("S{i},State {i},{}\n", rng.gen_range(10_000u64..80_000_000));
        }
        let roster = load_roster_str(&body).unwrap();
        let e: f64 = rng.gen_range(0.2..2.0);
        let house = 6 * n + rng.gen_range(0..300);
        let path = scratch(&format!("random{case}.csv"), &body);
        let (e_s, h_s) = (e.to_string(), house.to_string());
        let out = camcom(&[
            "apportion",
            "--roster",
            path.to_str().unwrap(),
            "--exponent",
            &e_s,
            "--house",
            &h_s,
            "--format",
            "csv",
        ]);
        let problem = ApportionmentProblem::new(roster)
            .with_house(house)
            .with_exponent(e)
            .with_cap(house);
        match uncapped(&problem, RoundingRule::Upward) {
            Ok(c) => {
                assert_eq!(seat_column(&stdout(&out)), c.seats.seats());
                checked += 1;
            }
            Err(_) => assert_diagnostic(&out, ""),
        }
    }
    assert!(checked >= 30);
}

#[test]
fn error_paths_are_single_line() {
    let bad = scratch("bad.csv", "code,name,pop\nA,Alpha,1\n");
    assert_diagnostic(
        &camcom(&["apportion", "--roster", bad.to_str().unwrap()]),
        "malformed roster",
    );

    let negative = scratch("neg.csv", "code,name,population\nA,Alpha,-5\nB,Beta,3\n");
    assert_diagnostic(
        &camcom(&["apportion", "--roster", negative.to_str().unwrap()]),
        "invalid population",
    );

    assert_diagnostic(
        &camcom(&["apportion", "--roster", "/nonexistent/roster.csv"]),
        "cannot read roster",
    );
    assert_diagnostic(
        &camcom(&["apportion", "--builtin", "eu27", "--house", "100"]),
        "infeasible",
    );
    assert_diagnostic(
        &camcom(&["apportion", "--builtin", "eu27", "--exponent", "-1"]),
        "exponent",
    );
    assert_diagnostic(
        &camcom(&["solve", "--builtin", "eu27", "--cap", "5"]),
        "cap",
    );

    // Two equal states and an odd number of seats to share.
    let twins = scratch(
        "twins.csv",
        "code,name,population\nA,Alpha,500\nB,Beta,500\n",
    );
    assert_diagnostic(
        &camcom(&[
            "apportion",
            "--roster",
            twins.to_str().unwrap(),
            "--house",
            "13",
            "--base",
            "0",
        ]),
        "tie at the last awarded seat between A, B",
    );

    let usage = camcom(&["apportion", "--builtin", "eu27", "--rule", "sideways"]);
    assert_diagnostic(&usage, "sideways");
    assert_eq!(usage.status.code(), Some(2));
    assert_diagnostic(&camcom(&["apportion"]), "required");
    assert_diagnostic(
        &camcom(&["table", "--builtin", "eu27", "--columns", "median"]),
        "unknown column",
    );
    assert_diagnostic(
        &camcom(&["apportion", "--builtin", "eu27", "--precision", "0"]),
        "precision",
    );
}

#[test]
fn roster_files_are_equivalent_to_the_builtin() {
    let mut body = String::from("code,name,population\n");
    for s in camcom_core::data::eu27().states() {
        body += &format!("{},{},{}\n", s.code, s.name, s.population);
    }
    let path = scratch("eu27.csv", &body);
    let from_file = stdout(&camcom(&[
        "solve",
        "--roster",
        path.to_str().unwrap(),
        "--format",
        "csv",
    ]));
    let builtin = stdout(&camcom(&["solve", "--builtin", "eu27", "--format", "csv"]));
    assert_eq!(csv_rows(&from_file), csv_rows(&builtin));
}
