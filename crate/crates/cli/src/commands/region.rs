//! `region`: status of one rule over a `(p, q)` grid, as CSV rows.
//!
//! `p` is the exponent of the function and `q` that of its derivatives (or
//! the two exponents of the order-`r` sharpness rule). Grids are
//! `lo..hi:step` or explicit lists.

use std::fmt::Write as _;

use serde_json::json;
use wiener_core::criteria::{
    check_bounded_derivative_corollary, check_dim1, check_even_d_proposition, check_legacy_a2d, check_theorem1,
    check_theorem2, check_theorem213b, CriterionVerdict, ExponentAssignment, RuleId, Theorem213bParams,
};
use wiener_core::exponent::format_rational;
use wiener_core::Exponent;

use super::report;
use crate::config::{RawConfig, Schema};
use crate::input::dimension;
use crate::parse;
use crate::{Report, UsageError, EXIT_PASS};

pub const SCHEMA: Schema = Schema {
    keys: &[
        ("rule", None),
        ("d", Some("1")),
        ("r", Some("1")),
        ("p", Some("1..4:1/4")),
        ("q", Some("1..4:1/4")),
    ],
    family: None,
};

const SUPPORTED: [RuleId; 7] = [
    RuleId::Thm1,
    RuleId::Thm2,
    RuleId::CorBounded,
    RuleId::PropEven,
    RuleId::Thm213b,
    RuleId::Thm41,
    RuleId::LegacyA2d,
];

fn decide(rule: RuleId, d: usize, r: u32, p: &Exponent, q: &Exponent) -> Result<CriterionVerdict, wiener_core::Error> {
    let uniform = || ExponentAssignment::uniform(d, p.clone(), q.clone());
    Ok(match rule {
        RuleId::Thm41 => check_dim1(p, q),
        RuleId::Thm213b => check_theorem213b(&Theorem213bParams::new(d, r, p.clone(), q.clone())?),
        RuleId::Thm1 => check_theorem1(&uniform()?),
        RuleId::Thm2 => check_theorem2(&uniform()?),
        RuleId::CorBounded => check_bounded_derivative_corollary(&uniform()?),
        RuleId::PropEven => check_even_d_proposition(&uniform()?),
        _ => check_legacy_a2d(&uniform()?),
    })
}

pub fn run(raw: &RawConfig) -> Result<Report, UsageError> {
    let cfg = raw.resolve(&SCHEMA)?;
    let rule = cfg.req("rule", |s| {
        let id: RuleId = s.parse().map_err(|e: wiener_core::Error| e.to_string())?;
        if SUPPORTED.contains(&id) {
            Ok(id)
        } else {
            let names: Vec<&str> = SUPPORTED.iter().map(RuleId::as_str).collect();
            Err(format!(
                "rule {id} has no (p, q) region; choose one of {}",
                names.join(", ")
            ))
        }
    })?;
    let d = dimension(&cfg)?;
    if rule == RuleId::Thm41 && d != 1 {
        return Err(UsageError("thm4.1 is a d=1 rule".into()));
    }
    let r: u32 = cfg.value("r")?;
    let ps = cfg.req("p", parse::exponent_grid)?;
    let qs = cfg.req("q", parse::exponent_grid)?;
    let mut csv = String::from("p,q,status,margin\n");
    let mut rows = Vec::new();
    for p in &ps {
        for q in &qs {
            let (status, margin) = match decide(rule, d, r, p, q) {
                Ok(v) => (v.status.as_str().to_string(), v.margin.as_ref().map(format_rational)),
                Err(_) => ("invalid".to_string(), None),
            };
            let _ = writeln!(csv, "{p},{q},{status},{}", margin.clone().unwrap_or_default());
            rows.push(json!({"p": p, "q": q, "status": status, "margin": margin}));
        }
    }
    let result = json!({"rule": rule.as_str(), "points": rows.len(), "rows": rows});
    Ok(report("region", &cfg, result, csv, EXIT_PASS))
}
