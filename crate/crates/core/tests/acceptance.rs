//! One line per acceptance criterion; exits non-zero if any fails.

use std::process::ExitCode;

use negdep::reproduce::{run_all, ReproduceConfig};

/// Wall-clock limits in seconds, where one applies.
fn time_limit(id: u8) -> Option<f64> {
    match id {
        1 => Some(60.0),
        9 => Some(300.0),
        _ => None,
    }
}

fn main() -> ExitCode {
    let cfg = ReproduceConfig::default();
    let mut failed = 0;
    for mut outcome in run_all(&cfg) {
        if let Some(limit) = time_limit(outcome.id) {
            if outcome.seconds > limit {
                outcome.passed = false;
                outcome.detail = format!("{} [over the {limit} s limit]", outcome.detail);
            }
        }
        if !outcome.passed {
            failed += 1;
        }
        println!("{outcome}");
    }
    println!("acceptance: {} failed", failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
