use std::process::{Command, Output};

use serde_json::Value;

fn mwt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mwt")).args(args).output().expect("run mwt")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn text(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).trim_end().to_string()
}

#[test]
fn eval_golden_values() {
    let out = mwt(&["eval", "n_eps(GF(3), 2)"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["class"]["form"], "<1,-1>");
    assert_eq!(v["class"]["invariants"]["rank"], 2);
    assert_eq!(v["class"]["invariants"]["disc"], 2);

    let out = mwt(&["--pretty", "eval", "transfer(geo, GF(9)/GF(3) by t^2+1, gw<1>)"]);
    assert_eq!(text(&out), "<1,-1> = h (rank 2, disc 2)");

    let out = mwt(&["--pretty", "eval", "residue(t, [t,2] over GF(3)(t))"]);
    assert_eq!(text(&out), "[2]");
}

#[test]
fn eval_errors_and_truth_values() {
    let out = mwt(&["eval", "residue(t, [t,2] over GF(3)(t)"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["error"]["kind"], "parse");
    assert_eq!(v["error"]["pos"], 30);

    let out = mwt(&["eval", "transfer(bt, GF(9)/GF(5), 1)"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["error"]["kind"], "semantic");

    assert_eq!(mwt(&["eval", "equal(h over GF(7), 2)"]).status.code(), Some(1));
    assert_eq!(mwt(&["eval", "equal(h over GF(7), 1 + gw<-1>)"]).status.code(), Some(0));
}

#[test]
fn suite_reports() {
    let args = ["suite", "kato-morel", "--q", "3", "--samples", "3", "--no-timing"];
    let first = mwt(&args);
    assert!(first.status.success());
    let v = json(&first);
    for key in ["suite", "params", "seed", "cases_run", "failures", "elapsed_ms", "pass"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["pass"], true);
    assert_eq!(v["elapsed_ms"], 0);
    assert_eq!(first.stdout, mwt(&args).stdout);
}

#[test]
fn failing_suite_exits_one_and_replays() {
    let out = mwt(&["suite", "lam-formulas", "--mode", "geo", "--samples", "1", "--max-degree", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let failures = v["failures"].as_array().unwrap();
    assert!(!failures.is_empty());
    for f in failures {
        let replay = mwt(&["--pretty", "eval", f["case"].as_str().unwrap()]);
        assert!(replay.status.success());
        assert!(text(&replay).starts_with(f["got"].as_str().unwrap()), "{} vs {}", text(&replay), f["got"]);
    }
}

#[test]
fn usage_errors() {
    assert_eq!(mwt(&["suite", "nope"]).status.code(), Some(2));
    assert_eq!(mwt(&["suite", "kato-morel", "--q", "9"]).status.code(), Some(2));
    assert_eq!(mwt(&["suite", "r3a", "--max-degree", "40"]).status.code(), Some(2));
    assert_eq!(mwt(&["suite", "projection", "--mode", "sideways"]).status.code(), Some(2));
    assert_eq!(mwt(&["table", "gw", "--q", "4"]).status.code(), Some(2));
    assert_eq!(mwt(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn tables() {
    let w3 = json(&mwt(&["table", "witt", "--q", "3"]));
    assert_eq!(w3["group"], "Z/4");
    let orders: Vec<u64> = w3["elements"].as_array().unwrap().iter().map(|e| e["additive_order"].as_u64().unwrap()).collect();
    assert_eq!(orders, [1, 4, 4, 2]);
    let w5 = json(&mwt(&["table", "witt", "--q", "5"]));
    assert_eq!(w5["group"], "Z/2 x Z/2");
    assert!(w5["addition"].as_array().unwrap().iter().enumerate().all(|(i, row)| row[i] == "0"));

    let g = json(&mwt(&["table", "gw", "--q", "9"]));
    assert_eq!(g["minus_one_is_square"], true);
    let h = g["rows"].as_array().unwrap().iter().find(|r| r["name"] == "h").unwrap();
    assert_eq!(h["form"], "<1,1>");
}

#[test]
fn list_suites() {
    let v = json(&mwt(&["list-suites"]));
    let names: Vec<&str> = v.as_array().unwrap().iter().map(|s| s["name"].as_str().unwrap()).collect();
    assert_eq!(names.len(), 14);
    assert!(names.contains(&"kato-morel") && names.contains(&"r1c-strong"));
}
