//! Acceptance criteria A1 to A10, one PASS/FAIL line each.
//!
//! Runs the full budgets by default. `HEATLAB_SUITE=fast` selects the reduced
//! budgets; criterion ids given as arguments restrict the run.

use std::process::ExitCode;

use heatlab::validate::{criterion_ids, run_criterion, Suite, ValidateOptions};

fn main() -> ExitCode {
    let suite = match std::env::var("HEATLAB_SUITE") {
        Ok(s) => s.parse::<Suite>().expect("HEATLAB_SUITE must be fast or full"),
        Err(_) => Suite::Full,
    };
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let opts = ValidateOptions {
        suite,
        ..Default::default()
    };
    let ids: Vec<&str> = criterion_ids()
        .into_iter()
        .filter(|id| filters.is_empty() || filters.iter().any(|f| f.eq_ignore_ascii_case(id)))
        .collect();
    println!("\nrunning {} acceptance criteria ({suite:?} suite)", ids.len());
    let mut failed = Vec::new();
    for id in ids {
        match run_criterion(id, &opts) {
            Ok(r) => {
                println!("{}", r.line());
                for c in &r.checks {
                    println!("    {} {:e} {} {:e}: {}", c.name, c.measured, c.relation, c.tolerance, c.pass);
                }
                for n in &r.notes {
                    println!("    - {n}");
                }
                if !r.pass {
                    failed.push(id);
                }
            }
            Err(e) => {
                println!("{id} FAIL error: {e}");
                failed.push(id);
            }
        }
    }
    if failed.is_empty() {
        println!("\nacceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("\nacceptance: failed {}", failed.join(", "));
        ExitCode::FAILURE
    }
}
