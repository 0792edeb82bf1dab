//! Prints one PASS/FAIL line per acceptance criterion and exits nonzero if any fails.

use std::process::ExitCode;

fn main() -> ExitCode {
    let results = grossen::verify::run_all(|c| println!("{c}"));
    if results.iter().all(|c| c.passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
