//! Exact rational numbers and Lebesgue exponents in `[1, +inf]`.
//!
//! Exponents are stored through their value, with `+inf` kept as a distinct
//! variant whose reciprocal is exactly zero. All comparisons go through the
//! reciprocal so that `inf` sorts above every finite exponent.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"n/d"`, `"n"` or a plain decimal such as `"1.25"` exactly.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Rational(text.to_string());
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.starts_with('-');
        let digits = whole.trim_start_matches(['-', '+']);
        if !digits.chars().all(|c| c.is_ascii_digit()) || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        if digits.is_empty() && frac.is_empty() {
            return Err(bad());
        }
        let joined = format!("{digits}{frac}");
        let mantissa: BigInt = if joined.is_empty() {
            BigInt::zero()
        } else {
            joined.parse().map_err(|_| bad())?
        };
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let value = Rational::new(mantissa, scale);
        return Ok(if negative { -value } else { value });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// Canonical `"num/den"` rendering used in every serialized report.
pub fn format_rational(r: &Rational) -> String {
    let r = r.reduced();
    format!("{}/{}", r.numer(), r.denom())
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub fn serialize_rational<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

pub fn serialize_opt_rational<S: Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&format_rational(r)),
        None => s.serialize_none(),
    }
}

/// A Lebesgue exponent `p` with `1 <= p <= inf`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Exponent {
    Finite(Rational),
    Infinite,
}

impl Exponent {
    pub fn new(value: Rational) -> Result<Self> {
        if value < Rational::one() {
            return Err(Error::Exponent(format!("{} is below 1", format_rational(&value))));
        }
        Ok(Exponent::Finite(value))
    }

    pub fn from_ratio(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::Exponent(format!("{numer}/0")));
        }
        Self::new(rat(numer, denom))
    }

    pub fn integer(n: i64) -> Result<Self> {
        Self::new(int(n))
    }

    pub fn one() -> Self {
        Exponent::Finite(Rational::one())
    }

    pub fn infinite() -> Self {
        Exponent::Infinite
    }

    /// Builds the exponent whose reciprocal is `recip` (`0` maps to `inf`).
    pub fn from_reciprocal(recip: Rational) -> Result<Self> {
        if recip.is_zero() {
            return Ok(Exponent::Infinite);
        }
        if recip.is_negative() || recip > Rational::one() {
            return Err(Error::Exponent(format!(
                "reciprocal {} outside [0, 1]",
                format_rational(&recip)
            )));
        }
        Ok(Exponent::Finite(recip.recip()))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Exponent::Finite(_))
    }

    pub fn value(&self) -> Option<&Rational> {
        match self {
            Exponent::Finite(v) => Some(v),
            Exponent::Infinite => None,
        }
    }

    pub fn reciprocal(&self) -> Rational {
        match self {
            Exponent::Finite(v) => v.recip(),
            Exponent::Infinite => Rational::zero(),
        }
    }

    /// The conjugate exponent `p'` with `1/p + 1/p' = 1`.
    pub fn conjugate(&self) -> Exponent {
        Exponent::from_reciprocal(Rational::one() - self.reciprocal())
            .expect("reciprocal of an exponent lies in [0, 1]")
    }

    /// Strictly inside `(1, inf)`.
    pub fn is_open_interior(&self) -> bool {
        matches!(self, Exponent::Finite(v) if !v.is_one())
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Exponent::Finite(v) => rational_to_f64(v),
            Exponent::Infinite => f64::INFINITY,
        }
    }

    /// Scales numerator and denominator by a common factor without changing the value.
    pub fn rescaled(&self, factor: i64) -> Exponent {
        match self {
            Exponent::Finite(v) => {
                let f = BigInt::from(factor);
                Exponent::Finite(Rational::new_raw(v.numer() * &f, v.denom() * &f))
            }
            Exponent::Infinite => Exponent::Infinite,
        }
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        other.reciprocal().cmp(&self.reciprocal())
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(v) => write!(f, "{}", format_rational(v)),
            Exponent::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "Inf" | "INF" | "infinity" | "∞" => Ok(Exponent::Infinite),
            other => Exponent::new(parse_rational(other)?),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
