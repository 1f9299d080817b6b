//! Runs every acceptance criterion at its stated tolerance and prints one
//! line per criterion. Exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use hessplus::verify::{checks, run_check, VerifyOptions};

fn main() -> ExitCode {
    let opts = VerifyOptions::default();
    let mut failed = 0;
    for check in checks() {
        let start = Instant::now();
        let result = run_check(&check, &opts);
        let secs = start.elapsed().as_secs_f64();
        let in_time = secs <= check.time_limit;
        let ok = result.passed && in_time;
        if !ok {
            failed += 1;
        }
        println!(
            "{} [{:>2}] {} (tol: {}) {:.2}s/{:.0}s: {}{}",
            if ok { "PASS" } else { "FAIL" },
            check.id,
            check.name,
            check.tolerance,
            secs,
            check.time_limit,
            result.detail,
            if in_time { "" } else { " [over time limit]" }
        );
    }
    println!("{} of {} criteria passed", checks().len() - failed, checks().len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
