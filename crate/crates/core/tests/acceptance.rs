//! Runs every acceptance criterion at its stated tolerance and time budget,
//! printing one line per criterion. Exits nonzero if any criterion fails.

use std::process::ExitCode;

use totreal::verify;

fn main() -> ExitCode {
    let filter: Vec<u8> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut failed = 0;
    let mut ran = 0;
    for &(id, _) in verify::CRITERIA.iter() {
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let outcome = verify::run(id);
        println!("{outcome}");
        ran += 1;
        if !outcome.passed {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", ran - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
