// One PASS/FAIL line per criterion. No libtest harness, so every line is
// printed whether or not it passes. ACCEPTANCE_ONLY=<id> runs a single one.

use zetalab_acceptance::{evaluate, CRITERIA};

fn main() {
    let only: Option<u32> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|v| v.parse().ok());
    let mut failed = Vec::new();
    for c in CRITERIA.iter().filter(|c| only.is_none_or(|o| o == c.id)) {
        let (pass, line) = evaluate(c);
        println!("{line}");
        if !pass {
            failed.push(c.id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
