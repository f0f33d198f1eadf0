use std::process::Command;

use loewner::lab::Outcome;
use loewner::suite::{run_report, Record, RunConfig};

/// Independent re-assertion of the headline thresholds on the recorded evidence.
/// `(criterion, key prefix, limit, upper)`: evidence ≤ limit when `upper`, else ≥ limit.
const THRESHOLDS: &[(usize, &str, f64, bool)] = &[
    (1, "min_eig/", -1e-9, false),
    (2, "square/entry_error", 1e-12, true),
    (3, "first_rel_err/", 1e-6, true),
    (3, "second_rel_err/", 1e-4, true),
    (4, "min_eig/", -1e-9, false),
    (5, "max_entry_diff/", 1e-10, true),
    (6, "deriv_at_one/", 1.0 + 1e-8, true),
    (6, "deriv_at_one/", 0.0, false),
    (6, "max_decomposition_error", 1e-10, true),
    (6, "max_kernel_slope_error", 1e-12, true),
    (7, "round_trip_weight_error", 1e-8, true),
    (7, "sqrt_fit_residual", 1e-6, true),
    (7, "normalisation_exact", 1.0, false),
    (7, "kernel_conversion_rel_error", 1e-14, true),
    (8, "monotone_min_eig/", -1e-9, false),
    (8, "transformer_min_eig/", -1e-9, false),
    (8, "transformer_residual/", 1e-8, true),
    (8, "continuity_bound_ratio/", 1.0, true),
    (8, "geometric_rel_error", 1e-6, true),
    (8, "representing_vs_synthesis", 1e-12, true),
    (9, "normalisation_error", 1e-10, true),
    (9, "affine_error", 1e-10, true),
    (9, "lipschitz_ratio/", 1.0, true),
    (9, "derivative_vs_fd", 1e-6, true),
    (10, "majorant_violation", 0.0, true),
    (10, "max_second_difference", 1e-12, true),
    (10, "idempotence_error", 1e-12, true),
    (10, "subadditivity_violation", 1e-12, true),
    (10, "homogeneity_error", 1e-12, true),
    (10, "affine_equivariance_error", 1e-12, true),
    (10, "caratheodory_reconstruction", 1e-9, true),
    (10, "caratheodory_support_excess", 0.0, true),
    (11, "linear_bound_excess", 1e-14, true),
    (11, "increment_negative", 1e-14, true),
    (11, "increment_bound_excess", 1e-14, true),
];

fn thresholds_hold(r: &Record) -> Vec<String> {
    let mut problems = Vec::new();
    for &(id, prefix, limit, upper) in THRESHOLDS.iter().filter(|t| t.0 == r.id) {
        let hits: Vec<(&String, &f64)> = r.evidence.iter().filter(|(k, _)| k.starts_with(prefix)).collect();
        if hits.is_empty() {
            problems.push(format!("criterion {id}: no evidence for '{prefix}'"));
        }
        for (k, v) in hits {
            let ok = if upper { *v <= limit } else { *v >= limit };
            if !ok {
                problems.push(format!("criterion {id}: {k} = {v:e} violates {} {limit:e}", if upper { "≤" } else { "≥" }));
            }
        }
    }
    problems
}

fn report_bytes(seed: &str) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_loewner"))
        .args(["report", "--seed", seed])
        .output()
        .expect("binary runs");
    assert!(out.status.code().is_some(), "report terminated by signal");
    out.stdout
}

fn main() {
    let report = run_report(&RunConfig::default());
    let mut failures = Vec::new();
    for r in &report.records {
        let problems = thresholds_hold(r);
        let ok = r.outcome == Outcome::Pass && problems.is_empty();
        println!("criterion {:>2} {:<34} {}", r.id, r.name, if ok { "PASS" } else { "FAIL" });
        if !ok {
            failures.push(format!("{}: {:?} {:?} {:?}", r.name, r.error, problems, r.witness));
        }
    }

    let first = report_bytes("1");
    let second = report_bytes("1");
    let deterministic = !first.is_empty() && first == second;
    println!("criterion 12 {:<34} {}", "report_determinism", if deterministic { "PASS" } else { "FAIL" });
    if !deterministic {
        failures.push("report bytes differ between identical runs".to_string());
    }

    if report.records.len() != 11 {
        failures.push(format!("expected 11 report records, found {}", report.records.len()));
    }
    if !failures.is_empty() {
        eprintln!("failed criteria:\n{}", failures.join("\n"));
        std::process::exit(1);
    }
}
