use std::process::{Command, Output};

use padic_dynamics::json::{pair_from_str, series1_from_json, series2_from_json, series_from_value};
use padic_dynamics::{Error, KScalar, RingConfig, TruncSeries2};
use padic_dynamics_cli::exit_code;
use serde_json::Value;

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_padic-dynamics"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok_json(args: &[&str]) -> Value {
    let out = cli(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn stdout(args: &[&str]) -> String {
    let out = cli(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn lubin_tate_pair() -> String {
    stdout(&["make-lubin-tate", "--p", "3", "--degree", "9", "--p-precision", "8"])
}

#[test]
fn newton_polygon_of_second_iterate() {
    let v = ok_json(&["newton-polygon", "--p", "3", "--f", "3X+X^3", "--iterate", "2"]);
    assert_eq!(v["points"], serde_json::json!([[1, 2], [3, 1], [9, 0]]));
    assert!(v["vertices"].as_array().unwrap().iter().all(|x| x["certified"] == true));
    let svg = stdout(&["newton-polygon", "--p", "3", "--f", "3X+X^3", "--iterate", "2", "--format", "svg"]);
    assert!(svg.starts_with("<svg") && svg.contains("(9,0)"));
}

#[test]
fn tilt_valuation_p3() {
    assert_eq!(ok_json(&["tilt-valuation", "--p", "3"]), Value::from("3/2"));
    assert_eq!(stdout(&["tilt-valuation", "--p", "3", "--r", "2", "--format", "tsv"]), "3/2\n");
}

#[test]
fn multiplicative_formal_group() {
    let v = ok_json(&["formal-group", "--p", "2", "--f", "2X+X^2", "--degree", "8", "--p-precision", "12"]);
    let k = RingConfig::from_spec(&serde_json::from_value(v["config"].clone()).unwrap()).unwrap();
    let law = series2_from_json(&k, &series_from_value(&v["F"]).unwrap()).unwrap();
    let one = KScalar::one(&k);
    let want = TruncSeries2::from_terms(&k, 8, &[((1, 0), one.clone()), ((0, 1), one.clone()), ((1, 1), one)]).unwrap();
    assert!(law.eq_to_prec(&want).unwrap());
    assert_eq!(v["integral"], true);
    assert!(v["certified_prec"].as_i64().unwrap() > 0);
}

#[test]
fn emitted_json_loads_back() {
    let text = lubin_tate_pair();
    let pair = pair_from_str(&text).unwrap();
    let again = serde_json::to_value(padic_dynamics::json::pair_to_json(&pair)).unwrap();
    assert_eq!(again, serde_json::from_str::<Value>(&text).unwrap());

    let conj = stdout(&["conjugate", "--input", &text, "--seed", "5"]);
    pair_from_str(&conj).unwrap();
    let h = ok_json(&["hypotheses", "--input", &conj]);
    assert_eq!(h["all_true"], true);

    let m = ok_json(&["mult-by-m", "--input", &text, "--m", "-1"]);
    let np = ok_json(&["newton-polygon", "--input", &m.to_string()]);
    assert_eq!(np["points"], serde_json::json!([[1, 0]]));

    let log = ok_json(&["log", "--p", "3", "--f", "3X+X^3", "--degree", "10"]);
    let k = RingConfig::from_spec(&serde_json::from_value(log["config"].clone()).unwrap()).unwrap();
    let s = series1_from_json(&k, &series_from_value(&log["log"]).unwrap()).unwrap();
    assert_eq!(s.degree(), 10);

    let verdict = ok_json(&["verify-conjecture", "--input", &text]);
    assert_eq!(verdict["integral"], true);
    series2_from_json(&k, &series_from_value(&verdict["F"]).unwrap()).unwrap();
}

#[test]
fn seeded_output_is_deterministic() {
    let text = lubin_tate_pair();
    let a = cli(&["conjugate", "--input", &text, "--seed", "42"]).stdout;
    let b = cli(&["conjugate", "--input", &text, "--seed", "42"]).stdout;
    let c = cli(&["conjugate", "--input", &text, "--seed", "43"]).stdout;
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn fixed_point_table() {
    let text = lubin_tate_pair();
    let t = stdout(&["fixed-points", "--input", &text, "--m", "6", "--format", "tsv"]);
    let counts: Vec<&str> = t.lines().skip(1).map(|l| l.rsplit('\t').next().unwrap()).collect();
    assert_eq!(counts, ["3", "3", "9", "3", "3", "9"]);
}

#[test]
fn exit_statuses() {
    assert_eq!(cli(&["log", "--p", "3", "--f", "3X+X^3", "--nope"]).status.code(), Some(1));
    assert_eq!(cli(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(cli(&["log", "--input", "{\"config\": 7}"]).status.code(), Some(1));
    assert_eq!(cli(&["newton-polygon", "--p", "3", "--f", "3X+X^3", "--format", "svg"]).status.code(), Some(0));
    assert_eq!(cli(&["tilt-valuation", "--p", "3", "--format", "svg"]).status.code(), Some(1));
    let noncommuting = cli(&["hypotheses", "--p", "3", "--f", "3X+X^3", "--u", "2X+X^2"]);
    assert_eq!(noncommuting.status.code(), Some(2));
    assert!(!noncommuting.stderr.is_empty() && noncommuting.stdout.is_empty());
    let shallow = cli(&["fixed-points", "--input", &lubin_tate_pair(), "--m", "9"]);
    assert_eq!(shallow.status.code(), Some(4));
    assert_eq!(exit_code(&Error::MismatchWithTheorem(String::new())), 3);
}
