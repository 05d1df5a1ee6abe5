//! One line per acceptance criterion; exits nonzero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use growthlift::acceptance;

fn main() -> ExitCode {
    let start = Instant::now();
    let results = acceptance::run_all(0);
    let mut all = true;
    for r in &results {
        all &= r.passed;
        println!(
            "criterion {:>2} {:<28} {}  ({} checks) {}",
            r.id,
            r.name,
            if r.passed { "PASS" } else { "FAIL" },
            r.checks,
            r.detail
        );
        for f in &r.failures {
            println!("    failure: {f}");
        }
    }
    println!("acceptance: {} in {:.1}s", if all { "PASS" } else { "FAIL" }, start.elapsed().as_secs_f64());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
