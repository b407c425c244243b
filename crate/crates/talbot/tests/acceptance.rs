//! Runs every acceptance criterion; one PASS/FAIL line each.

use std::process::ExitCode;

use talbot::acceptance::{run, CRITERIA};

fn main() -> ExitCode {
    talbot::init_threads();
    let mut failed = 0;
    for (id, _, _) in CRITERIA {
        let outcome = run(id).expect("criterion exists");
        println!("{}", outcome.line());
        if !outcome.passed() {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", CRITERIA.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
