//! Closed-form test functions with known membership status: the Gaussian,
//! the tensor hat and the radial oscillating model
//! `m(x) = theta(|x|) exp(i |x|^alpha) / |x|^beta`.

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::criteria::EtaVector;
use crate::error::{Error, Result};
use crate::exponent::{format_rational, parse_rational, rat, rational_to_f64, serialize_rational, Exponent, Rational};
use crate::field::ScalarField;
use crate::jet::Jet;

/// Smooth radial cutoff: 0 for `t <= a`, 1 for `t >= b`.
pub fn cutoff_theta(t: f64, a: f64, b: f64) -> Result<f64> {
    check_cutoff(a, b)?;
    Ok(smooth_step((t - a) / (b - a)))
}

fn check_cutoff(a: f64, b: f64) -> Result<()> {
    if !(a > 0.0 && b.is_finite() && a < b) {
        return Err(Error::Parameter(format!(
            "cutoff needs 0 < a < b, got a = {a}, b = {b}"
        )));
    }
    Ok(())
}

// psi(s) = E(s) / (E(s) + E(1 - s)) written as 1 / (1 + exp(1/s - 1/(1-s)))
fn smooth_step(s: f64) -> f64 {
    if s <= 0.0 {
        0.0
    } else if s >= 1.0 {
        1.0
    } else {
        1.0 / (1.0 + (1.0 / s - 1.0 / (1.0 - s)).exp())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModelParams {
    #[serde(serialize_with = "serialize_rational")]
    pub alpha: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub beta: Rational,
    pub d: usize,
    pub a: f64,
    pub b: f64,
}

impl ModelParams {
    pub fn new(alpha: Rational, beta: Rational, d: usize, a: f64, b: f64) -> Result<Self> {
        if !alpha.is_positive() || !beta.is_positive() {
            return Err(Error::Parameter(format!(
                "alpha and beta must be positive, got {} and {}",
                format_rational(&alpha),
                format_rational(&beta)
            )));
        }
        if d == 0 || d > 3 {
            return Err(Error::Dimension(d, "model functions are available for 1 <= d <= 3"));
        }
        check_cutoff(a, b)?;
        Ok(ModelParams { alpha, beta, d, a, b })
    }

    /// Default cutoff `a = 1`, `b = 2`.
    pub fn with_default_cutoff(alpha: Rational, beta: Rational, d: usize) -> Result<Self> {
        Self::new(alpha, beta, d, 1.0, 2.0)
    }

    /// Parses `alpha=2,beta=2.5,a=1,b=2`; the cutoff keys are optional.
    pub fn parse(spec: &str, d: usize) -> Result<Self> {
        let (mut alpha, mut beta, mut a, mut b) = (None, None, 1.0, 2.0);
        for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Parameter(format!("expected key=value, got '{part}'")))?;
            let num = |v: &str| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Parameter(format!("bad number '{v}' for {k}")))
            };
            match k.trim() {
                "alpha" => alpha = Some(parse_rational(v)?),
                "beta" => beta = Some(parse_rational(v)?),
                "a" => a = num(v)?,
                "b" => b = num(v)?,
                other => return Err(Error::Parameter(format!("unknown model parameter '{other}'"))),
            }
        }
        let alpha = alpha.ok_or_else(|| Error::Parameter("model needs alpha".into()))?;
        let beta = beta.ok_or_else(|| Error::Parameter("model needs beta".into()))?;
        Self::new(alpha, beta, d, a, b)
    }

    fn alpha_f(&self) -> f64 {
        rational_to_f64(&self.alpha)
    }

    fn beta_f(&self) -> f64 {
        rational_to_f64(&self.beta)
    }

    /// `g(s) = theta(sqrt s) exp(i s^{alpha/2}) s^{-beta/2}` so that `m(x) = g(|x|^2)`;
    /// returns the jet of `g` at `s`.
    fn profile_jet(&self, s: f64) -> Jet {
        let r = s.sqrt();
        if r <= self.a {
            return Jet::constant(0.0);
        }
        let sv = Jet::variable(s);
        let theta = if r >= self.b {
            Jet::constant(1.0)
        } else {
            let u = (sv.powf(0.5) - Jet::constant(self.a)).scale(1.0 / (self.b - self.a));
            let z = u.recip() - (Jet::constant(1.0) - u).recip();
            let z0 = z.value().re;
            if z0 > 700.0 {
                // every derivative is below exp(-700)
                return Jet::constant(0.0);
            } else if z0 < -700.0 {
                Jet::constant(1.0)
            } else {
                (Jet::constant(1.0) + z.exp()).recip()
            }
        };
        let phase = sv.powf(self.alpha_f() / 2.0).scale(Complex64::i()).exp();
        theta * phase * sv.powf(-self.beta_f() / 2.0)
    }
}

/// Evaluates the model at `x`; exactly 0 inside the ball of radius `a`.
pub fn evaluate_m(params: &ModelParams, x: &[f64]) -> Complex64 {
    let r = x.iter().map(|t| t * t).sum::<f64>().sqrt();
    if r <= params.a {
        return Complex64::zero();
    }
    let theta = smooth_step((r - params.a) / (params.b - params.a));
    let modulus = theta * r.powf(-params.beta_f());
    Complex64::from_polar(modulus, r.powf(params.alpha_f()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum KnownStatus {
    #[serde(rename = "in_A")]
    InA,
    #[serde(rename = "not_in_A")]
    NotInA,
    #[serde(rename = "boundary_unknown")]
    BoundaryUnknown,
}

impl KnownStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            KnownStatus::InA => "in_A",
            KnownStatus::NotInA => "not_in_A",
            KnownStatus::BoundaryUnknown => "boundary_unknown",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub status: KnownStatus,
    pub decided_by: String,
    /// Set for `d = 1, alpha = 1, beta <= 1/2`, which neither statement covers.
    pub derived_from_remark: bool,
}

/// Membership of the model in `A(R^d)`: in iff `beta/alpha > d/2`; out
/// iff `beta/alpha <= d/2` and (`d >= 2` or `alpha != 1`).
pub fn classify_m(params: &ModelParams) -> Classification {
    let d = Rational::from_integer(params.d.into());
    let two = rat(2, 1);
    if &params.beta * &two > &params.alpha * &d {
        Classification {
            status: KnownStatus::InA,
            decided_by: "statement-I".into(),
            derived_from_remark: false,
        }
    } else if params.d >= 2 || !params.alpha.is_one() {
        Classification {
            status: KnownStatus::NotInA,
            decided_by: "statement-II".into(),
            derived_from_remark: false,
        }
    } else {
        // m is then theta(|t|) e^{i|t|} |t|^{-beta}, whose transform has an
        // integrable |xi -+ 1|^{beta-1} singularity and decays like a smooth tail
        Classification {
            status: KnownStatus::InA,
            decided_by: "remark-alpha-d-1".into(),
            derived_from_remark: true,
        }
    }
}

/// Set of exponents `p` in `[1, inf]` with `D^eta m in L^p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExponentRange {
    /// Every `p >= 1`, including infinity.
    All,
    /// `p > threshold` (threshold `>= 1`), infinity included.
    Above {
        #[serde(serialize_with = "serialize_rational")]
        threshold: Rational,
    },
    /// Only `p = infinity` (decay rate exactly zero).
    InfinityOnly,
    Empty,
}

impl ExponentRange {
    pub fn contains(&self, p: &Exponent) -> bool {
        match (self, p) {
            (ExponentRange::All, _) => true,
            (ExponentRange::Above { .. }, Exponent::Infinite) => true,
            (ExponentRange::Above { threshold }, Exponent::Finite(v)) => v > threshold,
            (ExponentRange::InfinityOnly, p) => !p.is_finite(),
            (ExponentRange::Empty, _) => false,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            ExponentRange::All => "all p >= 1".into(),
            ExponentRange::Above { threshold } => format!("p > {}", format_rational(threshold)),
            ExponentRange::InfinityOnly => "p = inf only".into(),
            ExponentRange::Empty => "empty".into(),
        }
    }
}

/// Exponents `p` with `D^eta m in L^p`, from `|D^eta m(x)| ~ |x|^{|eta|(alpha-1) - beta}`.
/// Only `eta = 0` and `eta = (1,...,1)` are supported.
pub fn m_hypothesis_exponents(params: &ModelParams, eta: &EtaVector) -> Result<ExponentRange> {
    if eta.dim() != params.d {
        return Err(Error::Dimension(eta.dim(), "eta dimension must match the model"));
    }
    let k = eta.weight();
    if k != 0 && k != params.d {
        return Err(Error::Parameter(format!(
            "exponent ranges are only available for |eta| = 0 or |eta| = d, got |eta| = {k}"
        )));
    }
    let one = Rational::one();
    let rate = &params.beta - Rational::from_integer(k.into()) * (&params.alpha - &one);
    if rate.is_zero() {
        return Ok(ExponentRange::InfinityOnly);
    }
    if rate.is_negative() {
        return Ok(ExponentRange::Empty);
    }
    let threshold = Rational::from_integer(params.d.into()) / rate;
    Ok(if threshold < one {
        ExponentRange::All
    } else {
        ExponentRange::Above { threshold }
    })
}

/// Parameters `(alpha, beta)` of a model with `m in L_p`, `m' in L_q` and
/// `m` outside `A(R)`, for `1/p + 1/q < 1`.
///
/// Fixes `2 beta - alpha + 1 = c`, the midpoint of `(1/p + 1/q, 1)`, and takes
/// the smallest `beta` with denominator at most 64 in `(1/p, c - 1/q)`,
/// skipping `alpha = 1`.
pub fn construct_counterexample_params(p: &Exponent, q: &Exponent) -> Result<(Rational, Rational)> {
    let s = p.reciprocal() + q.reciprocal();
    let one = Rational::one();
    if !p.is_finite() || !q.is_finite() {
        return Err(Error::NoCounterexample(format!("p = {p} and q = {q} must be finite")));
    }
    if s >= one {
        return Err(Error::NoCounterexample(format!(
            "1/p + 1/q = {} is not below 1",
            format_rational(&s)
        )));
    }
    let two = rat(2, 1);
    let c = (&s + &one) / &two;
    let lo = p.reciprocal();
    let hi = &c - q.reciprocal();
    let bad = &c / &two;
    let alpha_of = |beta: &Rational| beta * &two + &one - &c;

    let mut best: Option<Rational> = None;
    for den in 1..=64i64 {
        let den_r = Rational::from_integer(den.into());
        let mut cand = ((&lo * &den_r).floor() + &one) / &den_r;
        if cand == bad {
            cand += Rational::one() / &den_r;
        }
        if cand < hi && best.as_ref().is_none_or(|b| &cand < b) {
            best = Some(cand);
        }
    }
    let beta = best.unwrap_or_else(|| {
        let mid = (&lo + &hi) / &two;
        if mid == bad {
            (&lo * &two + &hi) / rat(3, 1)
        } else {
            mid
        }
    });
    Ok((alpha_of(&beta), beta))
}

#[derive(Clone, Debug, PartialEq)]
pub enum GalleryKind {
    Gaussian,
    Hat,
    Model(ModelParams),
}

/// A named test function on `R^d` with closed-form partial derivatives.
#[derive(Clone, Debug, PartialEq)]
pub struct GalleryFunction {
    pub name: String,
    pub d: usize,
    pub kind: GalleryKind,
    pub classification: Classification,
}

impl GalleryFunction {
    /// Looks up `gaussian`, `hat`, `gaussian_nd`, `hat_nd` or
    /// `m:alpha=..,beta=..[,a=..,b=..]` in dimension `d`.
    pub fn parse(name: &str, d: usize) -> Result<Self> {
        if d == 0 || d > 3 {
            return Err(Error::Dimension(d, "gallery functions are available for 1 <= d <= 3"));
        }
        let classical = |kind| GalleryFunction {
            name: name.to_string(),
            d,
            kind,
            classification: Classification {
                status: KnownStatus::InA,
                decided_by: "classical".into(),
                derived_from_remark: false,
            },
        };
        match name {
            "gaussian" | "gaussian_nd" => Ok(classical(GalleryKind::Gaussian)),
            "hat" | "hat_nd" => Ok(classical(GalleryKind::Hat)),
            _ => {
                let rest = name
                    .strip_prefix("m:")
                    .ok_or_else(|| Error::UnknownFunction(name.to_string()))?;
                Ok(Self::model(ModelParams::parse(rest, d)?))
            }
        }
    }

    pub fn model(params: ModelParams) -> Self {
        let name = format!(
            "m:alpha={},beta={},a={},b={}",
            format_rational(&params.alpha),
            format_rational(&params.beta),
            params.a,
            params.b
        );
        GalleryFunction {
            name,
            d: params.d,
            classification: classify_m(&params),
            kind: GalleryKind::Model(params),
        }
    }

    pub fn status(&self) -> KnownStatus {
        self.classification.status
    }

    pub fn value(&self, x: &[f64]) -> Complex64 {
        match &self.kind {
            GalleryKind::Gaussian => Complex64::new((-x.iter().map(|t| t * t).sum::<f64>()).exp(), 0.0),
            GalleryKind::Hat => Complex64::new(x.iter().map(|t| hat(*t)).product(), 0.0),
            GalleryKind::Model(p) => evaluate_m(p, x),
        }
    }

    /// `D^eta f(x)`. At the kinks of the hat the symmetric derivative 0 is used.
    pub fn derivative(&self, eta: &EtaVector, x: &[f64]) -> Result<Complex64> {
        if eta.dim() != self.d || x.len() != self.d {
            return Err(Error::Dimension(
                x.len(),
                "point and eta must match the function dimension",
            ));
        }
        Ok(match &self.kind {
            GalleryKind::Gaussian => {
                let poly: f64 = eta.axes().into_iter().map(|j| -2.0 * x[j]).product();
                self.value(x) * poly
            }
            GalleryKind::Hat => {
                let v = (0..self.d)
                    .map(|j| if eta.contains(j) { hat_slope(x[j]) } else { hat(x[j]) })
                    .product();
                Complex64::new(v, 0.0)
            }
            GalleryKind::Model(p) => {
                // D^S g(|x|^2) = prod_{j in S} (2 x_j) * g^{(|S|)}(|x|^2)
                let s: f64 = x.iter().map(|t| t * t).sum();
                let g = p.profile_jet(s).derivative(eta.weight());
                let poly: f64 = eta.axes().into_iter().map(|j| 2.0 * x[j]).product();
                g * poly
            }
        })
    }
}

impl ScalarField for GalleryFunction {
    fn dim(&self) -> usize {
        self.d
    }

    fn value_at(&self, x: &[f64]) -> Complex64 {
        self.value(x)
    }
}

fn hat(t: f64) -> f64 {
    (1.0 - t.abs()).max(0.0)
}

fn hat_slope(t: f64) -> f64 {
    if t.abs() >= 1.0 || t == 0.0 {
        0.0
    } else {
        -t.signum()
    }
}
