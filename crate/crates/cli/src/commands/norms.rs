//! `norms`: `L^p` norms of a field, of its grid derivative `D^eta f`
//! (`eta` set) or of its difference `Delta_u^{eta,r} f` (`steps` set).

use std::fmt::Write as _;

use serde_json::json;
use wiener_core::criteria::EtaVector;
use wiener_core::field::DifferenceSpec;
use wiener_core::Exponent;

use super::report;
use crate::config::{RawConfig, Schema};
use crate::input::{load_field, FIELD_KEYS};
use crate::parse;
use crate::{Report, UsageError, EXIT_PASS};

pub const SCHEMA: Schema = Schema {
    keys: &[
        FIELD_KEYS[0],
        FIELD_KEYS[1],
        FIELD_KEYS[2],
        FIELD_KEYS[3],
        FIELD_KEYS[4],
        ("p", Some("1,2,inf")),
        ("eta", None),
        ("steps", None),
        ("order", Some("1")),
    ],
    family: None,
};

pub fn run(raw: &RawConfig) -> Result<Report, UsageError> {
    let cfg = raw.resolve(&SCHEMA)?;
    let (name, field) = load_field(&cfg)?;
    let d = field.dim();
    let ps: Vec<Exponent> = cfg.req("p", |s| {
        s.split(',').map(parse::exponent).collect::<Result<Vec<_>, _>>()
    })?;
    let eta = cfg.opt("eta", |s| match s.parse::<EtaVector>() {
        Ok(e) if e.dim() == d => Ok(e),
        Ok(_) => Err(format!("eta needs {d} entries")),
        Err(e) => Err(e.to_string()),
    })?;
    let steps = cfg.opt("steps", |s| {
        let v = parse::reals(s)?;
        match v.len() {
            1 => Ok(vec![v[0]; d]),
            n if n == d => Ok(v),
            n => Err(format!("expected 1 or {d} steps, got {n}")),
        }
    })?;
    let order: u32 = cfg.value("order")?;
    let (quantity, norms) = match steps {
        Some(steps) => {
            let eta = match eta {
                Some(e) => e,
                None => EtaVector::ones(d)?,
            };
            let spec = DifferenceSpec::new(eta, order, steps)?;
            let norms = ps
                .iter()
                .map(|p| field.difference_norm(&spec, p))
                .collect::<Result<Vec<_>, _>>()?;
            (format!("difference eta={eta} order={order}"), norms)
        }
        None => {
            let (label, target) = match eta {
                Some(e) => (format!("grid derivative eta={e}"), field.grid_derivative(&e)?),
                None => ("field".to_string(), field),
            };
            (label, ps.iter().map(|p| target.lp_norm(p)).collect())
        }
    };
    let mut csv = String::from("p,norm\n");
    let mut rows = Vec::new();
    for (p, n) in ps.iter().zip(&norms) {
        let _ = writeln!(csv, "{p},{n}");
        rows.push(json!({"p": p, "norm": n}));
    }
    let result = json!({"function": name, "quantity": quantity, "norms": rows});
    Ok(report("norms", &cfg, result, csv, EXIT_PASS))
}
