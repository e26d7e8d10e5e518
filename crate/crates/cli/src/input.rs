//! Field inputs: a gallery function sampled on a box, or a WFIELD / CSV file.

use std::fs::File;
use std::io::BufReader;

use wiener_core::field::{read_csv_1d, read_wfield, SampledField};
use wiener_core::gallery::GalleryFunction;

use crate::config::Resolved;
use crate::parse;
use crate::UsageError;

/// Keys consumed by [`load_field`], with defaults.
pub const FIELD_KEYS: [(&str, Option<&str>); 5] = [
    ("function", None),
    ("field", None),
    ("d", Some("1")),
    ("box", Some("-8..8")),
    ("points", Some("4097")),
];

pub fn dimension(cfg: &Resolved) -> Result<usize, UsageError> {
    cfg.req("d", |s| match s.parse::<usize>() {
        Ok(d) if (1..=3).contains(&d) => Ok(d),
        _ => Err(format!("expected 1, 2 or 3, got {s:?}")),
    })
}

pub fn gallery(cfg: &Resolved) -> Result<GalleryFunction, UsageError> {
    let d = dimension(cfg)?;
    cfg.req("function", |s| GalleryFunction::parse(s, d))
}

/// The sampled field named by `function` (on `box` with `points` per axis)
/// or read from the file named by `field`.
pub fn load_field(cfg: &Resolved) -> Result<(String, SampledField), UsageError> {
    match (cfg.has("function"), cfg.has("field")) {
        (true, true) => Err(UsageError("give either function= or field=, not both".into())),
        (false, false) => Err(UsageError("one of function= or field= is required".into())),
        (false, true) => {
            let path = cfg.raw("field").unwrap_or_default().to_string();
            let f = cfg.req("field", |p| {
                let file = File::open(p).map_err(|e| format!("cannot open {p}: {e}"))?;
                let reader = BufReader::new(file);
                let parsed = if p.ends_with(".csv") {
                    read_csv_1d(reader)
                } else {
                    read_wfield(reader)
                };
                parsed.map_err(|e| format!("{p}: {e}"))
            })?;
            Ok((path, f))
        }
        (true, false) => {
            let g = gallery(cfg)?;
            let d = g.d;
            let (lo, hi) = cfg.req("box", parse::real_range)?;
            let counts = cfg.req("points", |s| {
                let v = parse::list::<usize>(s)?;
                match v.len() {
                    1 => Ok(vec![v[0]; d]),
                    n if n == d => Ok(v),
                    n => Err(format!("expected 1 or {d} counts, got {n}")),
                }
            })?;
            let f = SampledField::sample(&g, &vec![lo; d], &vec![hi; d], &counts)
                .map_err(|e| UsageError(format!("cannot sample {}: {e}", g.name)))?;
            Ok((g.name.clone(), f))
        }
    }
}
