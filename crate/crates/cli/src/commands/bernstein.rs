//! `bernstein`: dyadic Bernstein sum over `scales` on every axis.

use serde_json::json;
use wiener_core::bernstein::{bernstein_sum_nd, ScaleRange, TailSettings, TailVerdict};

use super::{report, to_value};
use crate::config::{RawConfig, Schema};
use crate::input::{load_field, FIELD_KEYS};
use crate::parse;
use crate::{Report, UsageError, EXIT_INCONCLUSIVE, EXIT_NEGATIVE, EXIT_PASS};

pub const SCHEMA: Schema = Schema {
    keys: &[
        FIELD_KEYS[0],
        FIELD_KEYS[1],
        FIELD_KEYS[2],
        FIELD_KEYS[3],
        FIELD_KEYS[4],
        ("scales", Some("-10..8")),
        ("shells", Some("4")),
        ("delta", Some("0.05")),
    ],
    family: None,
};

pub fn run(raw: &RawConfig) -> Result<Report, UsageError> {
    let cfg = raw.resolve(&SCHEMA)?;
    let (name, field) = load_field(&cfg)?;
    let (lo, hi) = cfg.req("scales", parse::int_range)?;
    let range = ScaleRange::new(lo, hi)?;
    let settings = TailSettings {
        shells: cfg.req("shells", |s| match s.parse::<usize>() {
            Ok(k) if k >= 2 => Ok(k),
            _ => Err(format!("expected an integer >= 2, got {s:?}")),
        })?,
        delta: cfg.req("delta", |s| match parse::real(s) {
            Ok(v) if v > 0.0 && v < 1.0 => Ok(v),
            _ => Err(format!("expected a number in (0, 1), got {s:?}")),
        })?,
    };
    let r = bernstein_sum_nd(&field, &vec![range; field.dim()], settings)?;
    let exit = match r.verdict {
        TailVerdict::CertifiedConvergent => EXIT_PASS,
        TailVerdict::Inconclusive => EXIT_INCONCLUSIVE,
        TailVerdict::DivergentTrend => EXIT_NEGATIVE,
    };
    let result = json!({"function": name, "report": to_value(&r)});
    Ok(report("bernstein", &cfg, result, r.to_csv(), exit))
}
