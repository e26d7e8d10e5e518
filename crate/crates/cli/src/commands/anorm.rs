//! `anorm`: truncated A-norm estimates over a ladder of radii and the
//! fitted log-log trend. The output is trend evidence, not a certificate.

use serde_json::json;
use wiener_core::field::ScalarField;
use wiener_core::fourier::{a_norm_trend, TrendClass, TrendThresholds};

use super::{report, to_value};
use crate::config::{RawConfig, Schema};
use crate::input::{gallery, load_field};
use crate::parse;
use crate::{Report, UsageError, EXIT_INCONCLUSIVE, EXIT_NEGATIVE, EXIT_PASS};

pub const SCHEMA: Schema = Schema {
    keys: &[
        ("function", None),
        ("field", None),
        ("d", Some("1")),
        ("R", Some("16,32,64,128")),
        ("spacing", Some("1/64")),
        ("converged", Some("0.05")),
        ("growing", Some("0.1")),
    ],
    family: None,
};

pub fn run(raw: &RawConfig) -> Result<Report, UsageError> {
    let cfg = raw.resolve(&SCHEMA)?;
    let radii = cfg.req("R", |s| {
        let v = parse::reals(s)?;
        if v.iter().any(|&r| r <= 0.0) {
            return Err("radii must be positive".to_string());
        }
        Ok(v)
    })?;
    let spacing = cfg.req("spacing", parse::real)?;
    let thresholds = TrendThresholds {
        converged: cfg.req("converged", parse::real)?,
        growing: cfg.req("growing", parse::real)?,
    };
    if thresholds.converged > thresholds.growing {
        return Err(UsageError(
            "converged threshold must not exceed the growing threshold".into(),
        ));
    }
    let (name, source): (String, Box<dyn ScalarField>) = if cfg.has("field") && !cfg.has("function") {
        let (name, f) = load_field(&cfg)?;
        (name, Box::new(f))
    } else {
        let g = gallery(&cfg)?;
        (g.name.clone(), Box::new(g))
    };
    let trend = a_norm_trend(source.as_ref(), &radii, spacing, thresholds)?;
    let exit = match trend.classification {
        TrendClass::Converged => EXIT_PASS,
        TrendClass::Growing => EXIT_NEGATIVE,
        TrendClass::Inconclusive => EXIT_INCONCLUSIVE,
    };
    let result = json!({"function": name, "trend": to_value(&trend)});
    Ok(report("anorm", &cfg, result, trend.to_csv(), exit))
}
