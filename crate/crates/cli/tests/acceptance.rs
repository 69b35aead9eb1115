//! Runs `corpus` once and prints one PASS/FAIL line per acceptance criterion.

use std::collections::BTreeSet;
use std::process::ExitCode;

use horncode_cli::suite::{self, CRITERIA};
use horncode_cli::{checks_by_criterion, run_command, EXIT_OK};

fn main() -> ExitCode {
    // Tolerances and sizes fixed by the acceptance criteria.
    let pins: [(&str, f64, f64); 15] = [
        ("contact residual", suite::CONTACT_RESIDUAL_TOL, 0.05),
        ("contact budget (s)", suite::CONTACT_BUDGET_S, 10.0),
        ("K slope difference", suite::K_SLOPE_TOL, 0.05),
        ("gluing lists", suite::GLUING_LISTS as f64, 1000.0),
        ("random codes", suite::RANDOM_CODES as f64, 100.0),
        ("exponent tolerance", suite::EXPONENT_TOL, 0.1),
        ("horn resolution", suite::HORN_RESOLUTION as f64, 200.0),
        ("horn budget (s)", suite::HORN_BUDGET_S, 30.0),
        ("LNE pairs", suite::LNE_PAIRS as f64, 1e4),
        ("LNE bound T_1/2", suite::LNE_HALF_BOUND, 1.05),
        ("LNE bound T_-1", suite::LNE_CUSP_BOUND, 2.05),
        ("antipodal tolerance", suite::ANTIPODAL_REL_TOL, 0.05),
        ("cylinder resolution", suite::CYLINDER_RESOLUTION as f64, 256.0),
        ("metric triples", suite::METRIC_TRIPLES as f64, 1000.0),
        ("normal form budget (s)", suite::NORMAL_FORM_BUDGET_S, 120.0),
    ];
    let mut ok = true;
    for (what, have, want) in pins {
        if have != want {
            println!("pin mismatch: {what} is {have}, expected {want}");
            ok = false;
        }
    }

    let argv: Vec<String> = ["horncode", "corpus"].iter().map(|s| s.to_string()).collect();
    let (exit, report) = run_command(&argv);
    let names: BTreeSet<&str> = report.checks.iter().map(|c| c.name.as_str()).collect();
    if names.len() != report.checks.len() {
        println!("duplicate check names in the corpus report");
        ok = false;
    }
    let groups = checks_by_criterion(&report);
    for c in &CRITERIA {
        let checks = groups.get(&c.id).map(Vec::as_slice).unwrap_or(&[]);
        let mut pass = !checks.is_empty() && checks.iter().all(|k| k.pass);
        let mut extra = String::new();
        if c.id == 5 {
            pass &= exit == EXIT_OK;
            extra = format!(", corpus exit {exit}");
        }
        let verdict = if pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {verdict}  {} ({} checks{extra})", c.id, c.title, checks.len());
        for k in checks.iter().filter(|k| !k.pass) {
            println!("    {}: measured {}, expected {}", k.name, k.measured, k.expected);
        }
        ok &= pass;
    }
    if (exit == EXIT_OK) != report.checks.iter().all(|c| c.pass) {
        println!("corpus exit code {exit} disagrees with the check results");
        ok = false;
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
