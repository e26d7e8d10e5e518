//! Text formats: the `WFIELD` grid file and 1-D CSV samples.

use std::io::{BufRead, Write};

use num_complex::Complex64;

use super::SampledField;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValueKind {
    Real,
    Complex,
}

fn join(v: &[impl ToString]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

/// Writes the header line and one value per line (real and imaginary
/// columns for complex fields). `kind = None` picks real when every
/// imaginary part is zero.
pub fn write_wfield(field: &SampledField, kind: Option<ValueKind>, mut out: impl Write) -> std::io::Result<()> {
    let kind = kind.unwrap_or(if field.is_real() {
        ValueKind::Real
    } else {
        ValueKind::Complex
    });
    writeln!(
        out,
        "WFIELD d={} counts={} origin={} spacing={} kind={}",
        field.dim(),
        join(field.counts()),
        join(field.origin()),
        join(field.spacing()),
        match kind {
            ValueKind::Real => "real",
            ValueKind::Complex => "complex",
        }
    )?;
    for v in field.values() {
        match kind {
            ValueKind::Real => writeln!(out, "{}", v.re)?,
            ValueKind::Complex => writeln!(out, "{} {}", v.re, v.im)?,
        }
    }
    Ok(())
}

fn format_err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Format(format!("line {line}: {msg}"))
}

fn parse_list<T: std::str::FromStr>(text: &str, key: &str, line: usize) -> Result<Vec<T>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<T>()
                .map_err(|_| format_err(line, format!("bad {key} entry '{s}'")))
        })
        .collect()
}

pub fn read_wfield(input: impl BufRead) -> Result<SampledField> {
    let mut lines = input.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or_else(|| format_err(1, "empty file"))?;
    let header = header.map_err(|e| format_err(1, e))?;
    let mut words = header.split_whitespace();
    if words.next() != Some("WFIELD") {
        return Err(format_err(1, "missing WFIELD header"));
    }
    let (mut d, mut counts, mut origin, mut spacing, mut kind) = (None, None, None, None, None);
    for w in words {
        let (k, v) = w
            .split_once('=')
            .ok_or_else(|| format_err(1, format!("expected key=value, got '{w}'")))?;
        match k {
            "d" => d = Some(v.parse::<usize>().map_err(|_| format_err(1, "bad d"))?),
            "counts" => counts = Some(parse_list::<usize>(v, k, 1)?),
            "origin" => origin = Some(parse_list::<f64>(v, k, 1)?),
            "spacing" => spacing = Some(parse_list::<f64>(v, k, 1)?),
            "kind" => {
                kind = Some(match v {
                    "real" => ValueKind::Real,
                    "complex" => ValueKind::Complex,
                    _ => return Err(format_err(1, format!("unknown kind '{v}'"))),
                })
            }
            _ => return Err(format_err(1, format!("unknown header key '{k}'"))),
        }
    }
    let missing = |k: &str| format_err(1, format!("header lacks {k}"));
    let d = d.ok_or_else(|| missing("d"))?;
    let counts = counts.ok_or_else(|| missing("counts"))?;
    let origin = origin.ok_or_else(|| missing("origin"))?;
    let spacing = spacing.ok_or_else(|| missing("spacing"))?;
    let kind = kind.ok_or_else(|| missing("kind"))?;
    if counts.len() != d {
        return Err(format_err(1, format!("d={d} but {} counts", counts.len())));
    }
    let mut values = Vec::new();
    for (n, line) in lines {
        let line = line.map_err(|e| format_err(n, e))?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str| s.parse::<f64>().map_err(|_| format_err(n, format!("bad number '{s}'")));
        let v = match (kind, cols.as_slice()) {
            (ValueKind::Real, [re]) => Complex64::new(num(re)?, 0.0),
            (ValueKind::Complex, [re, im]) => Complex64::new(num(re)?, num(im)?),
            _ => return Err(format_err(n, "wrong number of columns")),
        };
        values.push(v);
    }
    SampledField::new(origin, spacing, counts, values)
}

/// Reads `x,value` or `x,re,im` rows with uniformly spaced `x`; a
/// non-numeric first row is treated as a header.
pub fn read_csv_1d(input: impl BufRead) -> Result<SampledField> {
    let mut xs = Vec::new();
    let mut values = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let n = i + 1;
        let line = line.map_err(|e| format_err(n, e))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed: std::result::Result<Vec<f64>, _> = cols.iter().map(|c| c.parse::<f64>()).collect();
        let row = match parsed {
            Ok(r) => r,
            Err(_) if xs.is_empty() && values.is_empty() && n == 1 => continue,
            Err(_) => return Err(format_err(n, "non-numeric value")),
        };
        match row.as_slice() {
            [x, re] => {
                xs.push(*x);
                values.push(Complex64::new(*re, 0.0));
            }
            [x, re, im] => {
                xs.push(*x);
                values.push(Complex64::new(*re, *im));
            }
            _ => return Err(format_err(n, "expected 2 or 3 columns")),
        }
    }
    if xs.len() < 2 {
        return Err(Error::Format("CSV needs at least two samples".into()));
    }
    let h = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
    for (k, x) in xs.iter().enumerate() {
        if (x - (xs[0] + k as f64 * h)).abs() > 1e-9 * h.abs().max(1.0) {
            return Err(Error::Format(format!("sample {} breaks uniform spacing", k + 1)));
        }
    }
    SampledField::new(vec![xs[0]], vec![h], vec![xs.len()], values)
}
