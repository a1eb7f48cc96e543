//! Acceptance harness: one line per criterion, nonzero exit if any fails.
//!
//! Each criterion is one suite of `ncl_core::verify`; the suites carry their
//! own instance families, zero-disagreement requirement and wall-clock
//! budgets (gadget specs 10 s, satisfiability DPs 60 s, H-word 600 s).

use std::process::ExitCode;

use ncl_core::verify::{run_suite, SUITES};

const CRITERIA: [(&str, &str); 10] = [
    ("gadgets", "gadget behavior specs, exhaustive"),
    ("semantics", "AND 5/8, OR 7/8, OR-tree all-out illegal"),
    ("cgs-dp", "satisfiability DPs agree with brute force"),
    ("bounded-dp", "bounded DP agrees with bounded search"),
    ("fpt", "subset DP and kernels preserve answers"),
    ("partition", "Partition reduction biconditional"),
    (
        "clique",
        "Clique reduction biconditional, one reversal per edge",
    ),
    ("hword", "H-word reduction agrees with H-word oracle"),
    ("restricted", "restricted, plane outputs; c(n) = c(2n)"),
    ("layout", "exact bandwidth/cutwidth vs permutations"),
];

fn main() -> ExitCode {
    assert_eq!(SUITES.len(), CRITERIA.len());
    let mut failed = 0;
    for (i, (suite, what)) in CRITERIA.iter().enumerate() {
        assert_eq!(SUITES[i], *suite);
        let line = match run_suite(suite, 0) {
            Ok(r) => {
                if !r.passed() {
                    failed += 1;
                }
                for f in r.failures.iter().take(5) {
                    eprintln!("  criterion {} failure: {f}", i + 1);
                }
                format!(
                    "criterion {}: {} [{}] {}",
                    i + 1,
                    if r.passed() { "PASS" } else { "FAIL" },
                    what,
                    r.summary()
                )
            }
            Err(e) => {
                failed += 1;
                format!("criterion {}: FAIL [{}] error: {e}", i + 1, what)
            }
        };
        println!("{line}");
    }
    println!(
        "acceptance: {} of {} criteria passed",
        CRITERIA.len() - failed,
        CRITERIA.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
