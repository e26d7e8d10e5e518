//! `hardy`: Hardy-Steklov ratio (`mode=hardy`), the explicit difference bound
//! (`mode=lemma-star`) or the empirical constant over seeded random fields
//! (`mode=empirical`). Axes are numbered from 1.

use serde_json::json;
use wiener_core::hardy::{empirical_constant, hardy_check, lemma_star_check, RandomPiecewiseConstant};
use wiener_core::Exponent;

use super::{report, to_value};
use crate::config::{RawConfig, Resolved, Schema};
use crate::input::{dimension, load_field, FIELD_KEYS};
use crate::parse;
use crate::{Report, UsageError, EXIT_NEGATIVE, EXIT_PASS};

const HARDY: Schema = Schema {
    keys: &[
        ("mode", Some("hardy")),
        FIELD_KEYS[0],
        FIELD_KEYS[1],
        FIELD_KEYS[2],
        FIELD_KEYS[3],
        FIELD_KEYS[4],
        ("q", Some("2")),
        ("Q", Some("2")),
        ("h", Some("1")),
        ("axes", Some("")),
    ],
    family: None,
};

const LEMMA_STAR: Schema = Schema {
    keys: &[
        ("mode", None),
        FIELD_KEYS[0],
        FIELD_KEYS[1],
        FIELD_KEYS[2],
        FIELD_KEYS[3],
        FIELD_KEYS[4],
        ("q", Some("2")),
        ("h", Some("1")),
        ("tol", Some("0.01")),
    ],
    family: None,
};

const EMPIRICAL: Schema = Schema {
    keys: &[
        ("mode", None),
        ("seed", None),
        ("d", Some("1")),
        ("q", Some("2")),
        ("Q", Some("4")),
        ("h_list", Some("1/32,1/16,1/8,1/4,1/2,1,2,4,8,16,32")),
        ("trials", Some("200")),
        ("axes", Some("")),
    ],
    family: None,
};

fn steps(cfg: &Resolved, n: usize) -> Result<Vec<f64>, UsageError> {
    cfg.req("h", |s| {
        let v = parse::reals(s)?;
        if v.iter().any(|&h| h <= 0.0) {
            return Err("steps must be positive".to_string());
        }
        match v.len() {
            1 => Ok(vec![v[0]; n]),
            m if m == n => Ok(v),
            m => Err(format!("expected 1 or {n} steps, got {m}")),
        }
    })
}

/// 1-based axis list (empty means all) converted to 0-based indices.
fn axes(cfg: &Resolved, d: usize) -> Result<Vec<usize>, UsageError> {
    let given = cfg.opt("axes", parse::list::<usize>)?.unwrap_or_default();
    if given.is_empty() {
        return Ok((0..d).collect());
    }
    cfg.req("axes", |_| {
        let mut out: Vec<usize> = Vec::new();
        for &a in &given {
            if a == 0 || a > d || out.contains(&(a - 1)) {
                return Err(format!("axes must be distinct values in 1..={d}"));
            }
            out.push(a - 1);
        }
        Ok(out)
    })
}

fn mode_hardy(cfg: &Resolved) -> Result<Report, UsageError> {
    let (name, field) = load_field(cfg)?;
    let axes = axes(cfg, field.dim())?;
    let h = steps(cfg, axes.len())?;
    let q: Exponent = cfg.req("q", parse::exponent)?;
    let big_q: Exponent = cfg.req("Q", parse::exponent)?;
    let r = hardy_check(&field, &q, &big_q, &h, &axes)?;
    let h_text: Vec<String> = r.h.iter().map(f64::to_string).collect();
    let csv = format!(
        "h,lhs,rhs_core,ratio\n{},{},{},{}\n",
        h_text.join(";"),
        r.lhs,
        r.rhs_core,
        r.ratio
    );
    let exit = if r.ratio.is_finite() { EXIT_PASS } else { EXIT_NEGATIVE };
    let result = json!({"mode": "hardy", "function": name, "report": to_value(&r)});
    Ok(report("hardy", cfg, result, csv, exit))
}

fn mode_lemma_star(cfg: &Resolved) -> Result<Report, UsageError> {
    let (name, field) = load_field(cfg)?;
    let h = steps(cfg, field.dim())?;
    let q: Exponent = cfg.req("q", parse::exponent)?;
    let tol = cfg.req("tol", parse::real)?;
    let r = lemma_star_check(&field, &q, &h)?;
    let holds = r.ratio <= 1.0 + tol;
    let h_text: Vec<String> = r.h.iter().map(f64::to_string).collect();
    let csv = format!(
        "h,lhs_sup,bound,ratio\n{},{},{},{}\n",
        h_text.join(";"),
        r.lhs_sup,
        r.bound,
        r.ratio
    );
    let result = json!({"mode": "lemma-star", "function": name, "holds": holds, "report": to_value(&r)});
    Ok(report(
        "hardy",
        cfg,
        result,
        csv,
        if holds { EXIT_PASS } else { EXIT_NEGATIVE },
    ))
}

fn mode_empirical(cfg: &Resolved) -> Result<Report, UsageError> {
    let seed: u64 = cfg
        .opt("seed", |s| s.parse::<u64>().map_err(|e| e.to_string()))?
        .ok_or_else(|| UsageError("hardy empirical is randomized: --seed is required".into()))?;
    let d = dimension(cfg)?;
    let axes = axes(cfg, d)?;
    let q: Exponent = cfg.req("q", parse::exponent)?;
    let big_q: Exponent = cfg.req("Q", parse::exponent)?;
    let h_list = cfg.req("h_list", |s| {
        let v = parse::reals(s)?;
        if v.is_empty() || v.iter().any(|&h| h <= 0.0) {
            return Err("need at least one positive step".to_string());
        }
        Ok(v)
    })?;
    let trials: usize = cfg.value("trials")?;
    let source = RandomPiecewiseConstant::new(d, seed);
    let r = empirical_constant(&source, &q, &big_q, &axes, &h_list, trials)?;
    let exit = if r.sup.is_finite() { EXIT_PASS } else { EXIT_NEGATIVE };
    let result = json!({"mode": "empirical", "generator": "random_piecewise_constant", "report": to_value(&r)});
    Ok(report("hardy", cfg, result, r.to_csv(), exit))
}

pub fn run(raw: &RawConfig) -> Result<Report, UsageError> {
    match raw.get("mode").unwrap_or("hardy") {
        "hardy" => mode_hardy(&raw.resolve(&HARDY)?),
        "lemma-star" => mode_lemma_star(&raw.resolve(&LEMMA_STAR)?),
        "empirical" => mode_empirical(&raw.resolve(&EMPIRICAL)?),
        other => Err(UsageError(format!(
            "unknown hardy mode {other:?} (expected hardy, lemma-star or empirical)"
        ))),
    }
}
