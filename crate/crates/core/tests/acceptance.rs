//! The acceptance suite. Prints one verdict line per criterion followed by its sub-checks.
//!
//! A few sub-checks are known not to hold for the model as stated; they are reported
//! as FAIL but do not fail the run. Any other failed check, missed time budget or
//! error exits non-zero. Pass criterion numbers as arguments to run a subset.

use qglauber::verify::{is_known_unattainable, run_criterion};
use std::process::ExitCode;

fn main() -> ExitCode {
    let selected: Vec<u8> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let ids: Vec<u8> = (1..=13).filter(|id| selected.is_empty() || selected.contains(id)).collect();
    let mut unexpected = Vec::new();
    let mut known = 0;
    for id in ids {
        match run_criterion(id) {
            Ok(r) => {
                println!("{r}");
                if !r.within_budget() {
                    unexpected.push(format!("criterion {id}: over time budget"));
                }
                for c in r.failures() {
                    if is_known_unattainable(id, c) {
                        known += 1;
                    } else {
                        unexpected.push(format!("criterion {id}: {}", c.label));
                    }
                }
            }
            Err(e) => {
                println!("criterion {id:>2} FAIL error: {e}");
                unexpected.push(format!("criterion {id}: {e}"));
            }
        }
    }
    println!("\n{known} known-unattainable sub-check(s) failed as documented");
    if unexpected.is_empty() {
        println!("acceptance: ok");
        ExitCode::SUCCESS
    } else {
        for u in &unexpected {
            println!("unexpected failure: {u}");
        }
        ExitCode::FAILURE
    }
}
