//! End-to-end runs of the binary against the fixture documents. Exit codes
//! are part of the contract: 0 clean, 1 witness found, 2 usage or parse
//! error.

use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn causet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_causet"))
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

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn validate_reports_clean_systems() {
    let out = causet(&["validate", &fixture("line3.jsonl")]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(stdout(&out), "ok\n");
}

#[test]
fn validate_prints_the_deadlock_cycle() {
    let out = causet(&["validate", &fixture("deadlock.jsonl")]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout(&out), "deadlock: c,a,d,b,c\n");
}

#[test]
fn validate_flags_crossed_deliveries() {
    let out = causet(&["validate", &fixture("crossing.jsonl")]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("channel A->B delivers"), "{}", stdout(&out));
}

#[test]
fn closure_lists_the_happened_before_pairs() {
    let out = causet(&["closure", &fixture("line3.jsonl")]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "a -> b\na -> beta\na -> x\na -> y\nb -> y\nalpha -> beta\nx -> beta\nx -> y\n"
    );
}

#[test]
fn closure_stops_on_cycles() {
    let out = causet(&["closure", &fixture("deadlock.jsonl")]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout(&out), "deadlock: c,a,d,b,c\n");
}

#[test]
fn quotient_prints_classes_then_covers() {
    let out = causet(&["quotient", &fixture("funnel.jsonl")]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "P1#0: w1 y1\nP1#1: x1\nP2#0: y2 x2\nP3#0: y3\nP3#1: z3 x3\n\
         P1#0 -> P1#1\nP1#0 -> P3#1\nP1#1 -> P2#0\nP3#0 -> P3#1\nP3#1 -> P2#0\n"
    );
}

#[test]
fn lamport_prints_the_table_and_checks() {
    let out = causet(&["lamport", &fixture("line3.jsonl")]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "a 1\nb 2\nx 2\ny 3\nalpha 1\nbeta 3\n");

    let check = causet(&["lamport", &fixture("line3.jsonl"), "--check"]);
    assert_eq!(code(&check), 0);
    assert_eq!(stdout(&check), "ok\n");
}

#[test]
fn vector_prints_the_table_and_checks() {
    let out = causet(&["vector", &fixture("line3.jsonl")]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "a (1,0,0)\nb (2,0,0)\nx (1,1,0)\ny (2,2,0)\nalpha (0,0,1)\nbeta (1,1,2)\n"
    );

    let check = causet(&["vector", &fixture("funnel.jsonl"), "--check"]);
    assert_eq!(code(&check), 0);
    assert_eq!(stdout(&check), "ok\n");
}

#[test]
fn aggregate_prints_exact_rationals() {
    let out = causet(&["aggregate", &fixture("line3.jsonl")]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "a 2/3\nb 4/3\nx 7/9\ny 14/9\nalpha 1/9\nbeta 1/1\n"
    );

    let check = causet(&["aggregate", &fixture("line3.jsonl"), "--check"]);
    assert_eq!(code(&check), 0);
    assert_eq!(stdout(&check), "ok\n");
}

#[test]
fn aggregate_rejects_non_line_systems() {
    let out = causet(&["aggregate", &fixture("funnel.jsonl")]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("line"), "{}", stderr(&out));
}

#[test]
fn multiutility_check_reports_the_function_count() {
    let out = causet(&["multiutility", &fixture("funnel.jsonl"), "--check"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(stdout(&out), "ok, 2 functions\n");

    let table = causet(&["multiutility", &fixture("line3.jsonl")]);
    assert_eq!(code(&table), 0);
    let text = stdout(&table);
    assert!(text.contains("v1 a "), "{text}");
    assert!(text.ends_with("realizer size: 2\n"), "{text}");
}

#[test]
fn dimension_prints_a_bare_number() {
    let chain = causet(&["dimension", &fixture("chain_poset.jsonl")]);
    assert_eq!(code(&chain), 0);
    assert_eq!(stdout(&chain), "1\n");

    let branching = causet(&["dimension", &fixture("branching_poset.jsonl")]);
    assert_eq!(stdout(&branching), "2\n");

    let funnel = causet(&["dimension", &fixture("funnel_poset.jsonl")]);
    assert_eq!(stdout(&funnel), "2\n");
}

#[test]
fn reduce_prints_covering_pairs() {
    let out = causet(&["reduce", &fixture("branching_poset.jsonl")]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "b < a\nb < d\nc < b\n");
}

#[test]
fn width_prints_a_bare_number() {
    let out = causet(&["width", &fixture("branching_poset.jsonl")]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "2\n");
}

#[test]
fn decompose_emits_a_system_document() {
    let out = causet(&["decompose", &fixture("branching_poset.jsonl")]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "{\"process\":\"P1\",\"events\":[\"c\",\"b\",\"a\"]}\n\
         {\"process\":\"P2\",\"events\":[\"d\"]}\n\
         {\"message\":{\"from\":\"b\",\"to\":\"d\"}}\n"
    );
}

#[test]
fn dot_renders_spacetime_and_hasse() {
    let space = causet(&["dot", &fixture("deadlock.jsonl"), "--mode", "spacetime"]);
    assert_eq!(code(&space), 0);
    let text = stdout(&space);
    assert_eq!(text.matches("subgraph cluster_").count(), 2);
    assert_eq!(text.matches("[style=dashed]").count(), 2);

    let hasse = causet(&["dot", &fixture("funnel_poset.jsonl"), "--mode", "hasse"]);
    assert_eq!(code(&hasse), 0);
    assert_eq!(stdout(&hasse).matches(" -> ").count(), 5);

    let cyclic = causet(&["dot", &fixture("deadlock.jsonl"), "--mode", "hasse"]);
    assert_eq!(code(&cyclic), 1);
    assert_eq!(stdout(&cyclic), "deadlock: c,a,d,b,c\n");

    let wrong = causet(&["dot", &fixture("funnel_poset.jsonl"), "--mode", "spacetime"]);
    assert_eq!(code(&wrong), 2);
}

#[test]
fn usage_and_parse_errors_exit_two() {
    let missing = causet(&["validate", "/nonexistent.jsonl"]);
    assert_eq!(code(&missing), 2);

    let unknown = causet(&["frobnicate"]);
    assert_eq!(code(&unknown), 2);

    let bad = fixture("bad.jsonl");
    std::fs::write(&bad, "{\"process\":\"A\",\"events\":[\"a\"]}\n{\"message\":{\"from\":\"a\",\"to\":\"nope\"}}\n").unwrap();
    let dangling = causet(&["validate", &bad]);
    assert_eq!(code(&dangling), 2);
    assert!(stderr(&dangling).contains("line 2"), "{}", stderr(&dangling));
    assert!(stderr(&dangling).contains("nope"), "{}", stderr(&dangling));
    std::fs::remove_file(&bad).ok();
}
