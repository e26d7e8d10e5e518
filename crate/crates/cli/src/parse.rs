//! Value syntax shared by the subcommands.

use std::str::FromStr;

use wiener_core::exponent::{format_rational, parse_rational};
use wiener_core::{Exponent, Rational};

/// Largest number of points a region axis may enumerate.
pub const MAX_REGION_POINTS: usize = 10_000;

pub fn list<T: FromStr>(text: &str) -> Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|e| format!("{s:?}: {e}")))
        .collect()
}

/// A real number, also accepting exact forms such as `1/64`.
pub fn real(text: &str) -> Result<f64, String> {
    let t = text.trim();
    if let Ok(v) = t.parse::<f64>() {
        return if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("{t:?} is not finite"))
        };
    }
    parse_rational(t)
        .map(|r| wiener_core::exponent::rational_to_f64(&r))
        .map_err(|e| e.to_string())
}

pub fn reals(text: &str) -> Result<Vec<f64>, String> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(real)
        .collect()
}

pub fn exponent(text: &str) -> Result<Exponent, String> {
    text.parse::<Exponent>().map_err(|e| e.to_string())
}

pub fn flag(text: &str) -> Result<bool, String> {
    match text.trim() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        other => Err(format!("expected true or false, got {other:?}")),
    }
}

fn split_range(text: &str) -> Result<(&str, &str), String> {
    text.split_once("..")
        .map(|(a, b)| (a.trim(), b.trim()))
        .ok_or_else(|| format!("expected lo..hi, got {text:?}"))
}

/// `lo..hi` with integer ends.
pub fn int_range(text: &str) -> Result<(i32, i32), String> {
    let (a, b) = split_range(text)?;
    let p = |s: &str| s.parse::<i32>().map_err(|e| format!("{s:?}: {e}"));
    Ok((p(a)?, p(b)?))
}

/// `lo..hi` with real ends.
pub fn real_range(text: &str) -> Result<(f64, f64), String> {
    let (a, b) = split_range(text)?;
    let (lo, hi) = (real(a)?, real(b)?);
    if hi <= lo {
        return Err(format!("need lo < hi, got {text:?}"));
    }
    Ok((lo, hi))
}

/// Exponent grid: `lo..hi:step` over rationals or an explicit list such as `1,3/2,inf`.
/// `lo > hi` gives an empty grid.
pub fn exponent_grid(text: &str) -> Result<Vec<Exponent>, String> {
    let Some((range, step)) = text.split_once(':') else {
        return list::<Exponent>(text);
    };
    let (a, b) = split_range(range)?;
    let rational = |s: &str| parse_rational(s).map_err(|e| e.to_string());
    let (lo, hi, step): (Rational, Rational, Rational) = (rational(a)?, rational(b)?, rational(step.trim())?);
    if step <= Rational::from_integer(0.into()) {
        return Err(format!("grid step must be positive, got {}", format_rational(&step)));
    }
    let mut out = Vec::new();
    let mut v = lo;
    while v <= hi {
        if out.len() == MAX_REGION_POINTS {
            return Err(format!("grid has more than {MAX_REGION_POINTS} points"));
        }
        out.push(Exponent::new(v.clone()).map_err(|e| e.to_string())?);
        v += &step;
    }
    Ok(out)
}
