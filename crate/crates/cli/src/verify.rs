//! Verification battery. Each named check produces a pass flag, a human
//! summary, and a worst-case witness; the battery exits nonzero when any
//! check fails.

use crate::commands::c2_value;
use crate::config::RunConfig;
use crate::output::emit_json;
use anyhow::{bail, Result};
use primediff::{
    build_table, champion_trace, envelope_summary, factor_profiles, lemma5_lower_bound,
    primoriality_violations, sieve_bound_check, theorem1_envelope,
};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

pub struct VerifyArgs {
    pub max: Option<u64>,
    pub checks: Option<String>,
    pub report: Option<PathBuf>,
    pub envelope_slack: Option<f64>,
    pub sieve_c: Option<f64>,
    pub sieve_slack: Option<f64>,
    pub lemma5_slack: Option<f64>,
}

const ALL_CHECKS: [&str; 5] = ["primorial", "envelope", "lemma4", "lemma5", "factors"];

/// Smallest sweep bound at which a check says anything at all; shorter
/// runs are refused instead of passing vacuously.
fn min_bound(check: &str) -> u64 {
    match check {
        "primorial" => 3,
        // the envelope and upper bound only inspect thresholds >= 100
        "envelope" => 101,
        "lemma4" => 100,
        "lemma5" => 1_000,
        // champion sets stabilize to primorials from x = 19 onward
        "factors" => 19,
        _ => unreachable!("check names are validated before use"),
    }
}

struct CheckOutcome {
    name: &'static str,
    pass: bool,
    details: String,
    worst_case: Value,
}

pub fn verify(args: VerifyArgs, cfg: &RunConfig) -> Result<ExitCode> {
    let x_max = args.max.unwrap_or(cfg.x_max);
    let selected: Vec<&'static str> = match &args.checks {
        Some(list) => {
            let mut names = Vec::new();
            for part in list.split(',').map(str::trim).filter(|p| !p.is_empty()) {
                match ALL_CHECKS.iter().find(|&&c| c == part) {
                    Some(&c) => {
                        if !names.contains(&c) {
                            names.push(c);
                        }
                    }
                    None => bail!(
                        "unknown check {part:?}; expected any of {}",
                        ALL_CHECKS.join(", ")
                    ),
                }
            }
            if names.is_empty() {
                bail!("empty check list");
            }
            names
        }
        None => ALL_CHECKS.to_vec(),
    };
    for &name in &selected {
        if x_max < min_bound(name) {
            bail!(
                "check {name} needs --max at least {}, got {x_max}",
                min_bound(name)
            );
        }
    }

    let envelope_slack = args.envelope_slack.unwrap_or(cfg.envelope_slack);
    let sieve_c = args.sieve_c.unwrap_or(cfg.sieve_c);
    let sieve_slack = args.sieve_slack.unwrap_or(cfg.sieve_slack);
    let lemma5_slack = args.lemma5_slack.unwrap_or(cfg.lemma5_slack);

    let table = build_table(x_max)?;
    let trace = champion_trace(&table, x_max)?;
    let mut outcomes = Vec::new();
    for &name in &selected {
        let outcome = match name {
            "primorial" => {
                let violations = primoriality_violations(&trace);
                CheckOutcome {
                    name: "primorial",
                    pass: violations.is_empty(),
                    details: format!(
                        "{} trace rows scanned, {} non-primorial champions",
                        trace.len(),
                        violations.len()
                    ),
                    worst_case: violations
                        .first()
                        .map_or(Value::Null, |&(x, d)| json!({ "x": x, "d": d })),
                }
            }
            "envelope" => {
                let reports = theorem1_envelope(&trace, envelope_slack)?;
                let s = envelope_summary(&reports);
                CheckOutcome {
                    name: "envelope",
                    pass: s.failures.is_empty(),
                    details: format!(
                        "{} rows with x >= 100 against x/log^2 x .. x/log x, slack {envelope_slack}, {} outside",
                        s.rows_checked,
                        s.failures.len()
                    ),
                    worst_case: json!({
                        "lower": { "x": s.min_lower_at.0, "d": s.min_lower_at.1, "ratio": s.min_lower_ratio },
                        "upper": { "x": s.max_upper_at.0, "d": s.max_upper_at.1, "ratio": s.max_upper_ratio },
                    }),
                }
            }
            "lemma4" => {
                let c2 = c2_value(cfg)?;
                let r = sieve_bound_check(x_max, &table, c2, sieve_c, sieve_slack)?;
                CheckOutcome {
                    name: "lemma4",
                    pass: r.pass,
                    details: format!(
                        "max G(x,d) log^2 x / (S(d) x) = {:.6} at d = {}, budget {} * (1 + {})",
                        r.max_ratio, r.max_ratio_d, r.c, r.slack
                    ),
                    worst_case: json!({ "d": r.max_ratio_d, "ratio": r.max_ratio }),
                }
            }
            "lemma5" => {
                let r = lemma5_lower_bound(x_max, &table, lemma5_slack)?;
                CheckOutcome {
                    name: "lemma5",
                    pass: r.pointwise_pass && r.averaged_pass && !r.vacuous,
                    details: format!(
                        "q = {}, pointwise bound {:.2} vs G* = {}, averaged {} vs {:.1} (slack {})",
                        r.q,
                        r.pointwise_bound,
                        r.g_star,
                        r.averaged_lhs,
                        r.averaged_rhs,
                        r.slack
                    ),
                    worst_case: json!({
                        "q": r.q,
                        "phi_q": r.phi_q,
                        "pointwise_bound": r.pointwise_bound,
                        "g_star": r.g_star,
                        "averaged_lhs": r.averaged_lhs,
                        "averaged_rhs": r.averaged_rhs,
                    }),
                }
            }
            "factors" => {
                let last = trace.last().expect("trace is nonempty for x_max >= 3");
                let profiles = factor_profiles(last, &table)?;
                let pass = profiles.iter().all(|p| !p.flagged && p.corollary3_ok);
                let worst = profiles
                    .iter()
                    .max_by(|a, b| a.deficiency.total_cmp(&b.deficiency))
                    .expect("champion set is nonempty");
                CheckOutcome {
                    name: "factors",
                    pass,
                    details: format!(
                        "{} champions at x = {}, max small-prime deficiency {:.4}",
                        profiles.len(),
                        last.x,
                        worst.deficiency
                    ),
                    worst_case: json!({
                        "d_star": worst.d_star,
                        "omega": worst.omega,
                        "m_value": worst.m_value,
                        "deficiency": worst.deficiency,
                    }),
                }
            }
            _ => unreachable!("check names are validated before use"),
        };
        outcomes.push(outcome);
    }

    for o in &outcomes {
        println!(
            "check {}: {} - {}",
            o.name,
            if o.pass { "pass" } else { "FAIL" },
            o.details
        );
    }
    let report: Vec<Value> = outcomes
        .iter()
        .map(|o| {
            json!({
                "name": o.name,
                "pass": o.pass,
                "details": o.details,
                "worst_case": o.worst_case,
            })
        })
        .collect();
    let report_path = args.report.unwrap_or_else(|| cfg.out_path("report.json"));
    emit_json(Some(&report_path), &Value::Array(report))?;
    if outcomes.iter().all(|o| o.pass) {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}
