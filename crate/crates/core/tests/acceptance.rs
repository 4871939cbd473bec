//! Runs acceptance criteria 1 to 10 and prints one line per criterion.

use std::process::ExitCode;
use std::time::Instant;

use webdimer::verify::{run_criterion, VerifyConfig};

fn main() -> ExitCode {
    let only: Vec<u8> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let cfg = VerifyConfig::default();
    let mut failed = 0;
    for id in 1..=10u8 {
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let start = Instant::now();
        match run_criterion(id, &cfg) {
            Ok(r) => {
                let tag = if r.passed { "PASS" } else { "FAIL" };
                println!("criterion {id:>2} {tag} {} ({:.1}s): {}", r.name, start.elapsed().as_secs_f64(), r.summary);
                if !r.passed {
                    failed += 1;
                    println!("    details: {}", r.details);
                }
            }
            Err(e) => {
                failed += 1;
                println!("criterion {id:>2} FAIL error: {e}");
            }
        }
    }
    println!("acceptance: {} failed", failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
