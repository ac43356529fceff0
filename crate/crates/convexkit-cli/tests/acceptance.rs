//! Acceptance gate: one test per top-level acceptance criterion.
//!
//! Criteria 1-6 run the corresponding randomized invariant suite in-process
//! at full size (the same suites `convexkit check` exposes); criterion 7
//! exercises the binary end to end and pins report determinism. Each test
//! prints a single PASS line (visible with `--nocapture`) and must finish
//! within a 60-second budget in exact arithmetic.

use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

use convexkit::suite::{run_suite, SuiteConfig};
use tempfile::TempDir;

const BUDGET: Duration = Duration::from_secs(60);
const SEED: u64 = 42;

fn run_criterion(number: u32, label: &str, suite: &str, expected_instances: usize) {
    let config = SuiteConfig::new(SEED);
    let start = Instant::now();
    let report = run_suite(suite, &config).expect("known suite name");
    let elapsed = start.elapsed();

    assert_eq!(
        report.instances, expected_instances,
        "criterion {number}: suite {suite} ran a reduced corpus"
    );
    assert!(
        report.passed,
        "criterion {number} — {label}: FAIL\n{}",
        report.failures.join("\n")
    );
    assert!(
        elapsed < BUDGET,
        "criterion {number}: suite {suite} exceeded the budget ({elapsed:?})"
    );
    println!(
        "criterion {number} — {label}: PASS ({} instances, {:.1}s)",
        report.instances,
        elapsed.as_secs_f64()
    );
}

#[test]
fn criterion_1_fenchel_conjugation_against_definitional_oracle() {
    run_criterion(
        1,
        "conjugates match the quadratic-scan oracle, Fenchel-Young holds, \
         biconjugates recover lower hulls",
        "fenchel",
        200,
    );
}

#[test]
fn criterion_2_support_sets_and_envelopes() {
    run_criterion(
        2,
        "support_set inverts support_function on polytopes and envelopes are \
         majorant-convex",
        "minkowski",
        200,
    );
}

#[test]
fn criterion_3_nonoblateness_polarity_and_decomposition() {
    run_criterion(
        3,
        "nonoblateness equals its diagonal reformulation, polarity is an \
         involution, polars of intersections decompose",
        "separation",
        300,
    );
}

#[test]
fn criterion_4_sandwich_witnesses_and_violations() {
    run_criterion(
        4,
        "feasible pairs yield verified affine witnesses, infeasible pairs \
         yield strict violation points",
        "sandwich",
        150,
    );
}

#[test]
fn criterion_5_operator_factorization_and_composition() {
    run_criterion(
        5,
        "canonical-operator factorization is exact, support-hull membership \
         matches row hulls, composition agrees with the formula",
        "calculus",
        350,
    );
}

#[test]
fn criterion_6_approximate_and_infinitesimal_subdifferentials() {
    run_criterion(
        6,
        "eps-subdifferentials are monotone and stabilize, infinitesimal \
         subdifferentials match standard parts, the chain rule holds under \
         exactness",
        "approximation",
        180,
    );
}

#[test]
fn criterion_7_reports_are_deterministic_across_runs() {
    let start = Instant::now();
    let dir = TempDir::new().expect("temp dir");
    let first = dir.path().join("first.json");
    let second = dir.path().join("second.json");

    // Two full `check` runs, launched concurrently to stay inside the budget.
    let spawn = |path: &std::path::Path| {
        Command::new(env!("CARGO_BIN_EXE_convexkit"))
            .args(["check", "--seed", "42", "--json"])
            .arg(path)
            .spawn()
            .expect("spawn binary")
    };
    let mut children = [spawn(&first), spawn(&second)];
    for child in &mut children {
        let status = child.wait().expect("wait for binary");
        assert_eq!(status.code(), Some(0), "check run failed");
    }

    let first_bytes = fs::read(&first).expect("first report");
    let second_bytes = fs::read(&second).expect("second report");
    assert!(!first_bytes.is_empty());
    assert_eq!(
        first_bytes, second_bytes,
        "criterion 7: repeated `check --seed 42` runs differ"
    );

    let elapsed = start.elapsed();
    assert!(
        elapsed < BUDGET,
        "criterion 7: exceeded the budget ({elapsed:?})"
    );
    println!(
        "criterion 7 — `check --seed 42` reports are byte-identical across runs: \
         PASS ({:.1}s)",
        elapsed.as_secs_f64()
    );
}
