//! `criteria`: every applicable rule for one exponent configuration.
//!
//! Keys: `d`; `p<bits>` for each eta (e.g. `p0 p1` for d=1, `p00 .. p11` for
//! d=2); `bounded` (eta bit strings); `p_strict`; `gamma` (decay exponents);
//! `radial` (`p_0..p_d`) with `radial_smooth`; `orders` (pure derivative
//! orders); `r` with `pure_p0`, `pure_p` and/or `sharp_p`, `sharp_q`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::json;
use wiener_core::criteria::{
    overall_status, run_all, DecayAssignment, EtaVector, ExponentAssignment, PureDerivativeOrders, RadialAssignment,
    RuleBundle, Status, Theorem213Params, Theorem213bParams,
};
use wiener_core::exponent::{format_rational, parse_rational};
use wiener_core::{Exponent, Rational};

use super::{report, to_value};
use crate::config::{RawConfig, Resolved, Schema};
use crate::input::dimension;
use crate::parse;
use crate::{Report, UsageError, EXIT_INCONCLUSIVE, EXIT_NEGATIVE, EXIT_PASS};

fn is_eta_key(k: &str) -> bool {
    k.strip_prefix('p')
        .is_some_and(|b| (1..=3).contains(&b.len()) && b.chars().all(|c| c == '0' || c == '1'))
}

pub const SCHEMA: Schema = Schema {
    keys: &[
        ("d", None),
        ("bounded", Some("")),
        ("p_strict", None),
        ("gamma", None),
        ("radial", None),
        ("radial_smooth", Some("false")),
        ("orders", None),
        ("r", None),
        ("pure_p0", None),
        ("pure_p", None),
        ("sharp_p", None),
        ("sharp_q", None),
    ],
    family: Some(("p<eta bits>", is_eta_key)),
};

fn etas(text: &str) -> Result<Vec<EtaVector>, String> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<EtaVector>().map_err(|e| e.to_string()))
        .collect()
}

fn exponents(text: &str) -> Result<Vec<Exponent>, String> {
    text.split(',').map(parse::exponent).collect()
}

/// A list of `n` items, or one item repeated `n` times.
fn broadcast<T: Clone>(v: Vec<T>, n: usize) -> Result<Vec<T>, String> {
    match v.len() {
        1 => Ok(vec![v[0].clone(); n]),
        m if m == n => Ok(v),
        m => Err(format!("expected 1 or {n} values, got {m}")),
    }
}

fn assignment(cfg: &Resolved, d: usize) -> Result<Option<ExponentAssignment>, UsageError> {
    let keys: Vec<String> = cfg.keys().filter(|k| is_eta_key(k)).map(String::from).collect();
    if keys.is_empty() {
        return Ok(None);
    }
    let mut map = BTreeMap::new();
    for k in &keys {
        let eta = cfg.req(k, |_| {
            let bits = &k[1..];
            if bits.len() != d {
                return Err(format!("eta {bits} does not have {d} entries"));
            }
            bits.parse::<EtaVector>().map_err(|e| e.to_string())
        })?;
        map.insert(eta, cfg.req(k, parse::exponent)?);
    }
    let bounded = cfg.opt("bounded", etas)?.unwrap_or_default();
    Ok(Some(ExponentAssignment::from_map(d, &map, &bounded)?))
}

fn bundle(cfg: &Resolved) -> Result<RuleBundle, UsageError> {
    let d = dimension(cfg)?;
    let mut b = RuleBundle {
        assignment: assignment(cfg, d)?,
        ..Default::default()
    };
    if let Some(p) = cfg.opt("p_strict", parse::exponent)? {
        if b.assignment.is_none() {
            return Err(UsageError("p_strict needs the p<eta> exponents".into()));
        }
        b.p_strict = Some(p);
    }
    if let (1, Some(a)) = (d, &b.assignment) {
        let one = EtaVector::ones(1)?;
        b.dim1 = Some((a.p0().clone(), a.get(one).clone()));
    }
    if let Some(g) = cfg.opt("gamma", |s| {
        let v: Vec<Rational> = s
            .split(',')
            .map(|t| parse_rational(t).map_err(|e| e.to_string()))
            .collect::<Result<_, _>>()?;
        broadcast(v, 1 << d)
    })? {
        b.decay = Some(DecayAssignment::new(d, g)?);
    }
    if let Some(p) = cfg.opt("radial", exponents)? {
        let smooth = cfg.req("radial_smooth", parse::flag)?;
        b.radial = Some(RadialAssignment::new(d, p, smooth)?);
    }
    if let Some(o) = cfg.opt("orders", parse::list::<u32>)? {
        if o.len() != d {
            return Err(UsageError(format!("orders needs {d} values, got {}", o.len())));
        }
        b.orders = Some(PureDerivativeOrders::new(o)?);
    }
    let r = cfg.opt("r", |s| s.parse::<u32>().map_err(|e| e.to_string()))?;
    let pure = (
        cfg.opt("pure_p0", parse::exponent)?,
        cfg.opt("pure_p", |s| broadcast(exponents(s)?, d))?,
    );
    let sharp = (
        cfg.opt("sharp_p", parse::exponent)?,
        cfg.opt("sharp_q", parse::exponent)?,
    );
    match (r, pure) {
        (Some(r), (Some(p0), Some(p))) => b.theorem213 = Some(Theorem213Params::new(d, r, p0, p)?),
        (_, (None, None)) => {}
        _ => return Err(UsageError("pure_p0 and pure_p go together with r".into())),
    }
    match (r, sharp) {
        (Some(r), (Some(p), Some(q))) => b.theorem213b = Some(Theorem213bParams::new(d, r, p, q)?),
        (_, (None, None)) => {}
        _ => return Err(UsageError("sharp_p and sharp_q go together with r".into())),
    }
    if b.is_empty() {
        return Err(UsageError(
            "no rule inputs given (set p<eta>, gamma, radial, orders or r with pure_/sharp_ keys)".into(),
        ));
    }
    Ok(b)
}

pub fn exit_code(status: Status) -> i32 {
    match status {
        Status::Certified => EXIT_PASS,
        Status::Inconclusive => EXIT_INCONCLUSIVE,
        Status::CounterexampleExists | Status::NotApplicable => EXIT_NEGATIVE,
    }
}

pub fn run(raw: &RawConfig) -> Result<Report, UsageError> {
    let cfg = raw.resolve(&SCHEMA)?;
    let verdicts = run_all(&bundle(&cfg)?);
    let overall = overall_status(&verdicts);
    let mut csv = String::from("rule_id,status,margin\n");
    for v in &verdicts {
        let margin = v.margin.as_ref().map(format_rational).unwrap_or_default();
        let _ = writeln!(csv, "{},{},{margin}", v.rule_id, v.status.as_str());
    }
    let (applicable, skipped): (Vec<_>, Vec<_>) = verdicts.iter().partition(|v| v.is_applicable());
    let result = json!({
        "overall": overall.as_str(),
        "verdicts": applicable.iter().map(to_value).collect::<Vec<_>>(),
        "not_applicable": skipped.iter().map(|v| v.rule_id.as_str()).collect::<Vec<_>>(),
    });
    Ok(report("criteria", &cfg, result, csv, exit_code(overall)))
}
