//! One PASS/FAIL line per acceptance criterion, followed by its measurements.
//! Exits nonzero when any criterion fails.

use std::process::ExitCode;

use bottomk_validation::*;

fn main() -> ExitCode {
    let criteria: [fn() -> Outcome; 10] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
    ];
    let outcomes: Vec<Outcome> = criteria
        .iter()
        .map(|c| {
            let o = c();
            println!("{}", o.line());
            for d in &o.details {
                println!("    {d}");
            }
            o
        })
        .collect();
    let failed: Vec<u8> = outcomes.iter().filter(|o| !o.pass).map(|o| o.id).collect();
    println!();
    for o in &outcomes {
        println!("{}", o.line());
    }
    println!("acceptance: {} passed, {} failed", outcomes.len() - failed.len(), failed.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
