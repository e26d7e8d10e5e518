//! `gallery`: known status of a gallery function, the exponent ranges of the
//! model and, given `p` and `q` instead of a function, counterexample
//! parameters for the line.

use std::fmt::Write as _;

use serde_json::{json, Value};
use wiener_core::criteria::{EtaVector, Witness};
use wiener_core::exponent::format_rational;
use wiener_core::gallery::{construct_counterexample_params, m_hypothesis_exponents, GalleryKind, KnownStatus};
use wiener_core::{Complex64, Error};

use super::{report, to_value};
use crate::config::{RawConfig, Resolved, Schema};
use crate::input::gallery;
use crate::parse;
use crate::{Report, UsageError, EXIT_INCONCLUSIVE, EXIT_NEGATIVE, EXIT_PASS};

pub const SCHEMA: Schema = Schema {
    keys: &[
        ("function", None),
        ("d", Some("1")),
        ("x", None),
        ("eta", None),
        ("p", None),
        ("q", None),
    ],
    family: None,
};

fn complex(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn counterexample(cfg: &Resolved) -> Result<Report, UsageError> {
    let p = cfg.req("p", parse::exponent)?;
    let q = cfg.req("q", parse::exponent)?;
    let mut csv = String::from("key,value\n");
    let (result, exit) = match construct_counterexample_params(&p, &q) {
        Ok((alpha, beta)) => {
            let witness = Witness::Model {
                alpha: alpha.clone(),
                beta: beta.clone(),
                p: p.clone(),
                q: q.clone(),
            };
            let _ = writeln!(
                csv,
                "alpha,{}\nbeta,{}",
                format_rational(&alpha),
                format_rational(&beta)
            );
            (
                json!({"counterexample": to_value(&witness), "valid": witness.is_valid()}),
                EXIT_PASS,
            )
        }
        Err(e @ Error::NoCounterexample(_)) => {
            (json!({"counterexample": null, "reason": e.to_string()}), EXIT_NEGATIVE)
        }
        Err(e) => return Err(e.into()),
    };
    Ok(report("gallery", cfg, result, csv, exit))
}

pub fn run(raw: &RawConfig) -> Result<Report, UsageError> {
    let cfg = raw.resolve(&SCHEMA)?;
    let pair = cfg.has("p") || cfg.has("q");
    match (cfg.has("function"), pair) {
        (true, true) => return Err(UsageError("give either function= or p= and q=, not both".into())),
        (false, true) => return counterexample(&cfg),
        _ => {}
    }
    let g = gallery(&cfg)?;
    let d = g.d;
    let x = cfg.opt("x", |s| {
        let v = parse::reals(s)?;
        if v.len() == d {
            Ok(v)
        } else {
            Err(format!("expected {d} coordinates, got {}", v.len()))
        }
    })?;
    let eta = cfg.opt("eta", |s| match s.parse::<EtaVector>() {
        Ok(e) if e.dim() == d => Ok(e),
        Ok(_) => Err(format!("eta needs {d} entries")),
        Err(e) => Err(e.to_string()),
    })?;
    let mut csv = String::from("key,value\n");
    let _ = writeln!(
        csv,
        "name,{}\nstatus,{}\ndecided_by,{}",
        g.name,
        g.status().as_str(),
        g.classification.decided_by
    );
    let mut result = json!({
        "name": g.name,
        "d": d,
        "classification": to_value(&g.classification),
    });
    if let GalleryKind::Model(params) = &g.kind {
        let mut ranges = serde_json::Map::new();
        for e in [EtaVector::zero(d)?, EtaVector::ones(d)?] {
            let range = m_hypothesis_exponents(params, &e)?;
            let _ = writeln!(csv, "exponents_{e},{}", range.describe());
            ranges.insert(
                e.to_string(),
                json!({"range": to_value(&range), "describe": range.describe()}),
            );
        }
        result["params"] = to_value(params);
        result["hypothesis_exponents"] = Value::Object(ranges);
    }
    if let Some(x) = &x {
        let v = g.value(x);
        let _ = writeln!(csv, "value_re,{}\nvalue_im,{}", v.re, v.im);
        result["x"] = json!(x);
        result["value"] = complex(v);
        if let Some(e) = &eta {
            let dv = g.derivative(e, x)?;
            let _ = writeln!(csv, "derivative_re,{}\nderivative_im,{}", dv.re, dv.im);
            result["eta"] = json!(e.to_string());
            result["derivative"] = complex(dv);
        }
    } else if eta.is_some() {
        return Err(UsageError("eta needs a point x".into()));
    }
    let exit = match g.status() {
        KnownStatus::InA => EXIT_PASS,
        KnownStatus::NotInA => EXIT_NEGATIVE,
        KnownStatus::BoundaryUnknown => EXIT_INCONCLUSIVE,
    };
    Ok(report("gallery", &cfg, result, csv, exit))
}
