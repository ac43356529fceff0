//! Run every invariant suite at full corpus size and print one line per
//! suite with its wall-clock time. Exits nonzero if any suite fails.

use std::time::Instant;

use convexkit::suite::{run_suite, SuiteConfig, SUITE_NAMES};

fn main() {
    let seed = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("seed must be a u64"))
        .unwrap_or(42);
    let config = SuiteConfig::new(seed);
    let mut ok = true;
    for name in SUITE_NAMES {
        let start = Instant::now();
        let report = run_suite(name, &config).expect("known suite name");
        let status = if report.passed { "PASS" } else { "FAIL" };
        println!(
            "{:<14} {:>4} instances  {}  ({:.2?})",
            report.suite,
            report.instances,
            status,
            start.elapsed()
        );
        for line in &report.failures {
            println!("    {line}");
        }
        ok &= report.passed;
    }
    std::process::exit(if ok { 0 } else { 1 });
}
