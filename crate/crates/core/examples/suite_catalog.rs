//! Runs every verification suite at its default size and prints one line each.

use std::time::Instant;

use vnlab::harness::{run_suite, SuiteParams, SUITES};

fn main() -> vnlab::Result<()> {
    let params = SuiteParams::seeded(2024);
    let start = Instant::now();
    for s in SUITES {
        let t = Instant::now();
        let r = run_suite(s.name, &params)?;
        println!(
            "{:<20} {:>5} trials  min slack {:>+.3e}  tol {:.0e}  {}  ({:.2}s)",
            r.suite,
            r.trials,
            r.min_slack,
            r.tolerance,
            if r.passed { "pass" } else { "FAIL" },
            t.elapsed().as_secs_f64()
        );
    }
    println!("total {:.2}s", start.elapsed().as_secs_f64());
    Ok(())
}
