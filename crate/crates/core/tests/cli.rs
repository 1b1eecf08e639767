use std::process::Command;

use bergerkit::cli::{main_with_args, run, Cli};
use clap::Parser;
use serde_json::Value;

fn results(args: &[&str]) -> (bool, Value) {
    let cli = Cli::try_parse_from(std::iter::once("bergerkit").chain(args.iter().copied())).unwrap();
    let out = run(&cli).unwrap();
    (out.report.pass, out.report.results)
}

fn code(args: &[&str]) -> i32 {
    main_with_args(std::iter::once("bergerkit").chain(args.iter().copied()))
}

#[test]
fn analyze_reports_berger_flags() {
    let (pass, r) = results(&["analyze", "--catalog", "so:3"]);
    assert!(pass);
    assert_eq!(r["curvature"]["is_berger"], true);
    assert_eq!(r["curvature"]["is_einstein_berger"], true);
    assert_eq!(r["curvature"]["dim_R"], 6);

    let (_, r) = results(&["analyze", "--catalog", "sl:2:R"]);
    assert_eq!(r["curvature"]["R1_nonempty"], false);

    let (pass, _) = results(&["analyze", "--fixture", "example1_n2"]);
    assert!(pass);
}

#[test]
fn enumerate_counts_families() {
    let (pass, r) = results(&["enumerate", "--signature", "2,2", "--holonomy", "so:2"]);
    assert!(pass);
    let counts: Vec<u64> = (1..=5).map(|f| r["counts"][f.to_string()].as_u64().unwrap()).collect();
    assert_eq!(counts, [1, 1, 3, 3, 2]);
}

#[test]
fn metric_commands() {
    let (pass, _) = results(&["metric", "verify", "--fixture", "example1"]);
    assert!(pass);
    let (pass, _) = results(&["metric", "verify", "--fixture", "example1_nonharmonic"]);
    assert!(!pass);
    let (pass, r) = results(&["metric", "holonomy", "--fixture", "flat_r13"]);
    assert!(pass);
    assert_eq!(r["dimension"], 0);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["catalog", "list"]), 0);
    assert_eq!(code(&["catalog", "describe", "no-such-algebra"]), 2);
    assert_eq!(code(&["analyze", "--fixture", "not_closed"]), 2);
    assert_eq!(code(&["enumerate", "--signature", "2,-1"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["metric", "verify", "--fixture", "example1_nonharmonic"]), 1);
    assert_eq!(code(&["metric", "holonomy", "--fixture", "example1", "--expect-dim", "4"]), 0);
}

#[test]
fn binary_writes_json_report() {
    let dir = std::env::temp_dir().join(format!("bergerkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let run = |extra: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_bergerkit"))
            .args(["analyze", "--catalog", "so:3", "--json"])
            .arg(&path)
            .args(extra)
            .env("BERGERKIT_THREADS", "2")
            .status()
            .unwrap()
    };
    assert_eq!(run(&[]).code(), Some(0));
    let first: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(first["pass"], true);
    assert_eq!(first["input_digest"].as_str().unwrap().len(), 64);
    run(&[]);
    let second: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(first["input_digest"], second["input_digest"]);
    std::fs::remove_dir_all(&dir).ok();
}
