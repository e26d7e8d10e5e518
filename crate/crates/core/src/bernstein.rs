//! Dyadic Bernstein-type sums
//! `sum_s 2^{(s_1 + ... + s_d)/2} || Delta_{pi 2^{-s_1}, ..., pi 2^{-s_d}} f ||_2`
//! over finite scale ranges, with a heuristic verdict on the tails.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::field::{DifferenceSpec, SampledField};

pub const MAX_SCALE_SPAN: i32 = 64;

/// Dyadic indices `lo..=hi`; scale `s` corresponds to the step `pi 2^{-s}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ScaleRange {
    pub lo: i32,
    pub hi: i32,
}

impl ScaleRange {
    pub fn new(lo: i32, hi: i32) -> Result<Self> {
        if lo > hi || hi as i64 - lo as i64 > MAX_SCALE_SPAN as i64 {
            return Err(Error::ScaleRange(format!(
                "need lo <= hi and hi - lo <= {MAX_SCALE_SPAN}, got {lo}..{hi}"
            )));
        }
        Ok(ScaleRange { lo, hi })
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> impl Iterator<Item = i32> {
        self.lo..=self.hi
    }
}

/// The step `h(s) = pi 2^{-s}`.
pub fn dyadic_step(s: i32) -> f64 {
    PI * 2f64.powi(-s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TailVerdict {
    CertifiedConvergent,
    Inconclusive,
    DivergentTrend,
}

impl TailVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            TailVerdict::CertifiedConvergent => "certified_convergent",
            TailVerdict::Inconclusive => "inconclusive",
            TailVerdict::DivergentTrend => "divergent_trend",
        }
    }
}

/// Tail heuristic parameters: `shells` outermost shells per end, certified
/// when every fitted ratio is below `1 - delta`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TailSettings {
    pub shells: usize,
    pub delta: f64,
}

impl Default for TailSettings {
    fn default() -> Self {
        TailSettings { shells: 4, delta: 0.05 }
    }
}

/// Fitted ratios of the shell sums at both ends of one axis, read outward.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxisTail {
    pub coarse: f64,
    pub fine: f64,
    pub coarse_ratios: Vec<f64>,
    pub fine_ratios: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DyadicReport {
    pub ranges: Vec<ScaleRange>,
    #[serde(serialize_with = "serialize_terms")]
    pub terms: Vec<(Vec<i32>, f64)>,
    pub partial_sum: f64,
    /// Per axis, the larger of the two end ratios.
    pub tail_ratio: Vec<f64>,
    pub tails: Vec<AxisTail>,
    pub verdict: TailVerdict,
    pub settings: TailSettings,
}

fn scale_key(s: &[i32]) -> String {
    s.iter().map(i32::to_string).collect::<Vec<_>>().join(",")
}

fn serialize_terms<S: Serializer>(terms: &[(Vec<i32>, f64)], ser: S) -> std::result::Result<S::Ok, S::Error> {
    let mut map = ser.serialize_map(Some(terms.len()))?;
    for (s, v) in terms {
        map.serialize_entry(&scale_key(s), v)?;
    }
    map.end()
}

impl DyadicReport {
    pub fn term(&self, s: &[i32]) -> Option<f64> {
        self.terms.iter().find(|(k, _)| k == s).map(|(_, v)| *v)
    }

    /// One row per multi-index: `s1,..,sd,term`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = (1..=self.ranges.len()).map(|j| format!("s{j}")).collect();
        let _ = writeln!(out, "{},term", header.join(","));
        for (s, v) in &self.terms {
            let _ = writeln!(out, "{},{v}", scale_key(s));
        }
        out
    }
}

fn check_resolution(field: &SampledField, ranges: &[ScaleRange]) -> Result<()> {
    for (axis, r) in ranges.iter().enumerate() {
        let spacing = field.spacing()[axis];
        let step = dyadic_step(r.hi);
        if step < spacing {
            let max_scale = (PI / spacing).log2().floor() as i32;
            return Err(Error::Resolution {
                axis,
                scale: r.hi,
                step,
                spacing,
                max_scale,
            });
        }
    }
    Ok(())
}

/// `2^{sum s / 2} ||Delta_{h(s)} f||_2` for one multi-index.
pub fn bernstein_term(field: &SampledField, s: &[i32]) -> Result<f64> {
    let steps: Vec<f64> = s.iter().map(|&k| dyadic_step(k)).collect();
    let spec = DifferenceSpec::full(steps)?;
    let norm = field.difference_norm(&spec, &Exponent::Finite(crate::exponent::int(2)))?;
    let weight = 2f64.powf(s.iter().map(|&k| k as f64).sum::<f64>() / 2.0);
    Ok(weight * norm)
}

pub fn bernstein_sum_1d(field: &SampledField, range: ScaleRange, settings: TailSettings) -> Result<DyadicReport> {
    if field.dim() != 1 {
        return Err(Error::Dimension(field.dim(), "bernstein_sum_1d needs a 1-D field"));
    }
    bernstein_sum_nd(field, &[range], settings)
}

pub fn bernstein_sum_nd(field: &SampledField, ranges: &[ScaleRange], settings: TailSettings) -> Result<DyadicReport> {
    if ranges.len() != field.dim() {
        return Err(Error::Dimension(ranges.len(), "one scale range per axis is required"));
    }
    check_resolution(field, ranges)?;
    let indices = scale_indices(ranges);
    let values: Vec<f64> = indices
        .par_iter()
        .map(|s| bernstein_term(field, s))
        .collect::<Result<_>>()?;
    let terms: Vec<(Vec<i32>, f64)> = indices.into_iter().zip(values).collect();
    let partial_sum = terms.iter().map(|(_, v)| v).sum();
    let (verdict, tails) = tail_verdict(&terms, ranges, settings);
    Ok(DyadicReport {
        ranges: ranges.to_vec(),
        tail_ratio: tails.iter().map(|t| t.coarse.max(t.fine)).collect(),
        terms,
        partial_sum,
        tails,
        verdict,
        settings,
    })
}

/// All multi-indices of the product of ranges, in lexicographic order.
pub fn scale_indices(ranges: &[ScaleRange]) -> Vec<Vec<i32>> {
    let mut out = vec![Vec::new()];
    for r in ranges {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                r.iter().map(move |s| {
                    let mut v = prefix.clone();
                    v.push(s);
                    v
                })
            })
            .collect();
    }
    out
}

/// Least-squares ratio of a positive sequence read outward, plus the
/// consecutive ratios. A sequence ending in 0 has ratio 0; an interior 0
/// followed by mass has ratio infinity.
fn fit_ratio(seq: &[f64]) -> (f64, Vec<f64>) {
    let ratios: Vec<f64> = seq
        .windows(2)
        .map(|w| match (w[0] == 0.0, w[1] == 0.0) {
            (_, true) => 0.0,
            (true, false) => f64::INFINITY,
            _ => w[1] / w[0],
        })
        .collect();
    if *seq.last().unwrap() == 0.0 {
        return (0.0, ratios);
    }
    if seq.contains(&0.0) {
        return (f64::INFINITY, ratios);
    }
    let n = seq.len() as f64;
    let mean_i = (n - 1.0) / 2.0;
    let logs: Vec<f64> = seq.iter().map(|v| v.ln()).collect();
    let mean_l = logs.iter().sum::<f64>() / n;
    let (mut num, mut den) = (0.0, 0.0);
    for (i, l) in logs.iter().enumerate() {
        let di = i as f64 - mean_i;
        num += di * (l - mean_l);
        den += di * di;
    }
    ((num / den).exp(), ratios)
}

/// Verdict from per-axis shell sums `S_j(s) = sum of terms with s_j = s`:
/// certified when every end ratio is below `1 - delta`, divergent when some
/// end has all consecutive ratios at least 1, inconclusive otherwise or
/// when an axis has fewer than `shells` scales.
pub fn tail_verdict(
    terms: &[(Vec<i32>, f64)],
    ranges: &[ScaleRange],
    settings: TailSettings,
) -> (TailVerdict, Vec<AxisTail>) {
    let k = settings.shells.max(2);
    let mut tails = Vec::with_capacity(ranges.len());
    let mut enough = true;
    for (axis, r) in ranges.iter().enumerate() {
        let mut shells = vec![0.0; r.len()];
        for (s, v) in terms {
            shells[(s[axis] - r.lo) as usize] += v;
        }
        if shells.len() < k {
            enough = false;
            tails.push(AxisTail {
                coarse: f64::NAN,
                fine: f64::NAN,
                coarse_ratios: Vec::new(),
                fine_ratios: Vec::new(),
            });
            continue;
        }
        let fine_seq = &shells[shells.len() - k..];
        let coarse_seq: Vec<f64> = shells[..k].iter().rev().copied().collect();
        let (fine, fine_ratios) = fit_ratio(fine_seq);
        let (coarse, coarse_ratios) = fit_ratio(&coarse_seq);
        tails.push(AxisTail {
            coarse,
            fine,
            coarse_ratios,
            fine_ratios,
        });
    }
    if !enough {
        return (TailVerdict::Inconclusive, tails);
    }
    let limit = 1.0 - settings.delta;
    let verdict = if tails.iter().all(|t| t.coarse < limit && t.fine < limit) {
        TailVerdict::CertifiedConvergent
    } else if tails
        .iter()
        .any(|t| t.fine_ratios.iter().all(|&r| r >= 1.0) || t.coarse_ratios.iter().all(|&r| r >= 1.0))
    {
        TailVerdict::DivergentTrend
    } else {
        TailVerdict::Inconclusive
    };
    (verdict, tails)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(f: impl Fn(i32) -> f64) -> (Vec<(Vec<i32>, f64)>, Vec<ScaleRange>) {
        let r = ScaleRange::new(-19, 19).unwrap();
        (r.iter().map(|k| (vec![k], f(k))).collect(), vec![r])
    }

    #[test]
    fn tail_examples() {
        let s = TailSettings::default();
        let (t, r) = synthetic(|k| 2f64.powi(-k.abs()));
        let (v, tails) = tail_verdict(&t, &r, s);
        assert_eq!(v, TailVerdict::CertifiedConvergent);
        assert!((tails[0].fine - 0.5).abs() < 1e-12 && (tails[0].coarse - 0.5).abs() < 1e-12);
        let (t, r) = synthetic(|_| 1.0);
        assert_eq!(tail_verdict(&t, &r, s).0, TailVerdict::DivergentTrend);
        let (t, r) = synthetic(|k| 1.0 / ((k.abs() + 1) as f64).powi(2));
        let (v, tails) = tail_verdict(&t, &r, s);
        assert!(tails[0].fine > 0.85 && tails[0].fine < 0.95);
        assert_eq!(v, TailVerdict::CertifiedConvergent);
        let short = vec![ScaleRange::new(0, 2).unwrap()];
        let t: Vec<_> = (0..=2).map(|k| (vec![k], 1.0)).collect();
        assert_eq!(tail_verdict(&t, &short, s).0, TailVerdict::Inconclusive);
    }

    #[test]
    fn scale_ranges() {
        assert!(ScaleRange::new(3, 2).is_err());
        assert!(ScaleRange::new(-40, 30).is_err());
        assert_eq!(ScaleRange::new(-2, 1).unwrap().len(), 4);
        let idx = scale_indices(&[ScaleRange::new(0, 1).unwrap(), ScaleRange::new(5, 6).unwrap()]);
        assert_eq!(idx, vec![vec![0, 5], vec![0, 6], vec![1, 5], vec![1, 6]]);
    }

    #[test]
    fn zero_field_is_certified() {
        let f = SampledField::from_fn(vec![-1.0], vec![0.01], vec![201], |_| 0.0.into()).unwrap();
        let r = bernstein_sum_1d(&f, ScaleRange::new(-3, 6).unwrap(), TailSettings::default()).unwrap();
        assert_eq!(r.partial_sum, 0.0);
        assert_eq!(r.verdict, TailVerdict::CertifiedConvergent);
        let err = bernstein_sum_1d(&f, ScaleRange::new(0, 9).unwrap(), TailSettings::default());
        assert!(matches!(err, Err(Error::Resolution { max_scale: 8, .. })));
    }
}
