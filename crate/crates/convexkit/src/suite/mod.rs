//! Named invariant suites over seeded random corpora. Each suite checks one
//! batch of library-wide guarantees end to end and reports pass/fail with
//! per-instance failure descriptions and deterministic tallies. Instances
//! draw from per-index RNG streams and merge in index order, so a report is
//! byte-identical for a given seed regardless of the execution strategy.

pub(crate) mod corpus;

mod approximation;
mod calculus;
mod fenchel;
mod minkowski;
mod sandwich;
mod separation;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::exec::{map_indexed, Parallelism};

/// The available suites, in report order.
pub const SUITE_NAMES: [&str; 6] =
    ["fenchel", "minkowski", "separation", "sandwich", "calculus", "approximation"];

/// How a suite run is seeded, scheduled, and sized.
#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    pub seed: u64,
    pub parallelism: Parallelism,
    /// Cap on the instance count of each suite part; `None` runs the full
    /// corpus sizes fixed by the acceptance checks.
    pub instance_cap: Option<usize>,
}

impl SuiteConfig {
    pub fn new(seed: u64) -> Self {
        SuiteConfig { seed, parallelism: Parallelism::Parallel, instance_cap: None }
    }

    pub(crate) fn cap(&self, n: usize) -> usize {
        self.instance_cap.map_or(n, |c| n.min(c))
    }
}

/// Outcome of one suite: instance count, failures (empty means the suite
/// passed), and named corpus tallies for judging corpus strength.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub instances: usize,
    pub passed: bool,
    pub failures: Vec<String>,
    pub details: BTreeMap<String, u64>,
}

/// Per-instance result: failure descriptions plus additive tallies.
#[derive(Debug, Default)]
pub(crate) struct InstanceOutcome {
    pub failures: Vec<String>,
    pub tallies: Vec<(&'static str, u64)>,
}

impl InstanceOutcome {
    pub fn new() -> Self {
        Self::default()
    }

    /// Record a failure when `cond` does not hold.
    pub fn check(&mut self, cond: bool, msg: impl FnOnce() -> String) {
        if !cond {
            self.failures.push(msg());
        }
    }

    pub fn note(&mut self, key: &'static str, add: u64) {
        self.tallies.push((key, add));
    }
}

/// Run one part of a suite: `n` independent instances, each with its own
/// deterministic RNG stream; errors escaping an instance become failures.
pub(crate) fn run_part<F>(
    config: &SuiteConfig,
    suite_id: u64,
    part: u64,
    n: usize,
    f: F,
) -> Vec<InstanceOutcome>
where
    F: Fn(&mut corpus::Rng, usize, &mut InstanceOutcome) -> crate::error::Result<()>
        + Sync
        + Send,
{
    map_indexed(config.parallelism, n, |i| {
        let mut rng = corpus::instance_rng(config.seed, suite_id, (part << 24) | i as u64);
        let mut out = InstanceOutcome::new();
        if let Err(e) = f(&mut rng, i, &mut out) {
            out.failures.push(format!("instance {i}: unexpected error: {e}"));
        }
        out
    })
}

const MAX_REPORTED_FAILURES: usize = 25;

/// Merge part outcomes (already in index order) into the suite report.
pub(crate) fn finish(suite: &'static str, parts: Vec<Vec<InstanceOutcome>>) -> SuiteReport {
    let mut failures = Vec::new();
    let mut details: BTreeMap<String, u64> = BTreeMap::new();
    let mut instances = 0usize;
    for part in parts {
        instances += part.len();
        for outcome in part {
            failures.extend(outcome.failures);
            for (key, add) in outcome.tallies {
                *details.entry(key.to_string()).or_default() += add;
            }
        }
    }
    let passed = failures.is_empty();
    if failures.len() > MAX_REPORTED_FAILURES {
        let extra = failures.len() - MAX_REPORTED_FAILURES;
        failures.truncate(MAX_REPORTED_FAILURES);
        failures.push(format!("... {extra} more failures suppressed"));
    }
    SuiteReport { suite, instances, passed, failures, details }
}

/// Run a suite by name; `None` for an unknown name.
pub fn run_suite(name: &str, config: &SuiteConfig) -> Option<SuiteReport> {
    match name {
        "fenchel" => Some(fenchel::run(config)),
        "minkowski" => Some(minkowski::run(config)),
        "separation" => Some(separation::run(config)),
        "sandwich" => Some(sandwich::run(config)),
        "calculus" => Some(calculus::run(config)),
        "approximation" => Some(approximation::run(config)),
        _ => None,
    }
}

/// Run every suite in [`SUITE_NAMES`] order.
pub fn run_all(config: &SuiteConfig) -> Vec<SuiteReport> {
    SUITE_NAMES
        .iter()
        .map(|name| run_suite(name, config).expect("listed suites exist"))
        .collect()
}
