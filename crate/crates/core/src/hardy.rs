//! Numerical checks of Hardy-Steklov window inequalities
//! `|| int_{x-h}^{x+h} F ||_Q <= C h^{1/Q + 1/q'} || F ||_q`
//! (and their multi-variable mixed-norm forms), and of the explicit bound
//! `|| Delta_h f ||_inf <= 2^{d/q'} (h_1...h_d)^{1/q'} || D^1 f ||_q`.

use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::criteria::EtaVector;
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::field::{trapezoid_weights, DifferenceSpec, SampledField};

/// `int_{-inf}^{u} phi(v) dv` for the unit hat `phi(v) = (1 - |v|)_+`.
fn hat_antiderivative(u: f64) -> f64 {
    if u <= -1.0 {
        0.0
    } else if u <= 0.0 {
        (u + 1.0) * (u + 1.0) / 2.0
    } else if u <= 1.0 {
        1.0 - (1.0 - u) * (1.0 - u) / 2.0
    } else {
        1.0
    }
}

/// Nonzero `(node, weight)` pairs of the window integral `int_{x-h}^{x+h}`
/// of the piecewise-linear interpolant along one axis.
fn window_weights(n: usize, origin: f64, spacing: f64, x: f64, h: f64) -> Vec<(usize, f64)> {
    let last = (n - 1) as f64;
    let u0 = ((x - h - origin) / spacing).max(0.0);
    let u1 = ((x + h - origin) / spacing).min(last);
    if u1 <= u0 {
        return Vec::new();
    }
    let k0 = (u0.floor() as usize).saturating_sub(1);
    let k1 = ((u1.ceil() as usize) + 1).min(n - 1);
    (k0..=k1)
        .map(|k| {
            let kf = k as f64;
            (k, spacing * (hat_antiderivative(u1 - kf) - hat_antiderivative(u0 - kf)))
        })
        .filter(|(_, w)| *w != 0.0)
        .collect()
}

/// Nonzero interpolation weights at `x` along one axis.
fn point_weights(n: usize, origin: f64, spacing: f64, x: f64) -> Vec<(usize, f64)> {
    let last = (n - 1) as f64;
    let pos = (x - origin) / spacing;
    if !(-1e-9..=last + 1e-9).contains(&pos) {
        return Vec::new();
    }
    let pos = pos.clamp(0.0, last);
    let m = (pos.floor() as usize).min(n - 2);
    let w = pos - m as f64;
    vec![(m, 1.0 - w), (m + 1, w)]
}

fn check_nonnegative(field: &SampledField) -> Result<()> {
    if field
        .values()
        .iter()
        .any(|v| v.im != 0.0 || v.re < 0.0 || v.re.is_nan())
    {
        return Err(Error::Field("Hardy checks need a nonnegative real field".into()));
    }
    Ok(())
}

fn check_axes(field: &SampledField, axes: &[usize], h: &[f64]) -> Result<()> {
    if axes.is_empty() || axes.len() != h.len() {
        return Err(Error::Parameter(
            "need one step per averaged axis and at least one axis".into(),
        ));
    }
    let mut seen = vec![false; field.dim()];
    for &a in axes {
        if a >= field.dim() || std::mem::replace(&mut seen[a], true) {
            return Err(Error::Parameter(format!("invalid or repeated axis {a}")));
        }
    }
    if let Some(v) = h.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
        return Err(Error::Parameter(format!("window half-width must be positive, got {v}")));
    }
    Ok(())
}

/// Integral of `F` over `prod_{j in axes} [x_j - h_j, x_j + h_j]` with the
/// other coordinates fixed at `x`.
pub fn steklov_average(field: &SampledField, axes: &[usize], h: &[f64], x: &[f64]) -> Result<f64> {
    check_axes(field, axes, h)?;
    check_nonnegative(field)?;
    if x.len() != field.dim() {
        return Err(Error::Dimension(x.len(), "point must match the field"));
    }
    let per_axis: Vec<Vec<(usize, f64)>> = (0..field.dim())
        .map(|j| {
            let (n, o, s) = (field.counts()[j], field.origin()[j], field.spacing()[j]);
            match axes.iter().position(|&a| a == j) {
                Some(i) => window_weights(n, o, s, x[j], h[i]),
                None => point_weights(n, o, s, x[j]),
            }
        })
        .collect();
    let mut total = 0.0;
    let mut stack = vec![(0usize, 0usize, 1.0f64)];
    while let Some((axis, flat, w)) = stack.pop() {
        if axis == field.dim() {
            total += w * field.values()[flat].re;
            continue;
        }
        for &(k, wk) in &per_axis[axis] {
            stack.push((axis + 1, flat * field.counts()[axis] + k, w * wk));
        }
    }
    Ok(total)
}

/// A line of window integrals together with its quadrature weights.
struct WindowLine {
    values: Vec<f64>,
    weights: Vec<f64>,
}

type WindowFn = Box<dyn Fn(&[f64]) -> WindowLine + Sync>;

/// Window integrals `W(x) = int_{x-h}^{x+h} g` of one sampled line on a
/// grid covering the support of `W`. When `2h` exceeds the line width the
/// constant middle stretch is collapsed into the quadrature weights.
fn window_line_layout(n: usize, spacing: f64, h: f64) -> (usize, WindowFn) {
    let width = (n - 1) as f64 * spacing;
    let r = h / spacing;
    let antideriv = move |g: &[f64]| {
        let mut c = vec![0.0; n];
        for i in 1..n {
            c[i] = c[i - 1] + (g[i - 1] + g[i]) / 2.0;
        }
        c
    };
    let eval = move |g: &[f64], c: &[f64], u: f64| -> f64 {
        let last = (n - 1) as f64;
        if u <= 0.0 {
            0.0
        } else if u >= last {
            c[n - 1]
        } else {
            let m = (u.floor() as usize).min(n - 2);
            let w = u - m as f64;
            c[m] + w * g[m] + w * w / 2.0 * (g[m + 1] - g[m])
        }
    };
    if 2.0 * h >= width {
        let plateau = 2.0 * h - width;
        let mut weights = trapezoid_weights(n, spacing);
        weights.extend(trapezoid_weights(n, spacing));
        weights[n - 1] += plateau / 2.0;
        weights[n] += plateau / 2.0;
        let f = move |g: &[f64]| {
            let c = antideriv(g);
            let total = c[n - 1];
            let mut values: Vec<f64> = c.iter().map(|v| v * spacing).collect();
            values.extend(c.iter().map(|v| (total - v) * spacing));
            WindowLine {
                values,
                weights: weights.clone(),
            }
        };
        (2 * n, Box::new(f))
    } else {
        let pad = r.ceil() as usize + 1;
        let len = n + 2 * pad;
        let weights = trapezoid_weights(len, spacing);
        let f = move |g: &[f64]| {
            let c = antideriv(g);
            let values = (0..len)
                .map(|o| {
                    let pos = o as f64 - pad as f64;
                    spacing * (eval(g, &c, pos + r) - eval(g, &c, pos - r))
                })
                .collect();
            WindowLine {
                values,
                weights: weights.clone(),
            }
        };
        (len, Box::new(f))
    }
}

/// Window integrals over `axes` on a grid with per-axis quadrature weights.
fn window_grid(field: &SampledField, axes: &[usize], h: &[f64]) -> (Vec<f64>, Vec<usize>, Vec<Vec<f64>>) {
    let d = field.dim();
    let mut counts = field.counts().to_vec();
    let mut weights: Vec<Vec<f64>> = (0..d)
        .map(|j| trapezoid_weights(counts[j], field.spacing()[j]))
        .collect();
    let mut values: Vec<f64> = field.values().iter().map(|v| v.re).collect();
    for (&axis, &hj) in axes.iter().zip(h) {
        let n = counts[axis];
        let (len, op) = window_line_layout(n, field.spacing()[axis], hj);
        let inner: usize = counts[axis + 1..].iter().product();
        let outer: usize = counts[..axis].iter().product();
        let mut out = vec![0.0; outer * len * inner];
        let mut axis_weights = Vec::new();
        let mut line = vec![0.0; n];
        for o in 0..outer {
            for i in 0..inner {
                for (k, v) in line.iter_mut().enumerate() {
                    *v = values[(o * n + k) * inner + i];
                }
                let w = op(&line);
                for (k, v) in w.values.iter().enumerate() {
                    out[(o * len + k) * inner + i] = *v;
                }
                if axis_weights.is_empty() {
                    axis_weights = w.weights;
                }
            }
        }
        values = out;
        counts[axis] = len;
        weights[axis] = axis_weights;
    }
    (values, counts, weights)
}

fn weighted_power_sum(values: &[f64], counts: &[usize], weights: &[Vec<f64>], p: f64) -> f64 {
    let d = counts.len();
    let row = counts[d - 1];
    let partial: Vec<f64> = values
        .par_chunks(row)
        .enumerate()
        .map(|(r, chunk)| {
            let mut outer = 1.0;
            let mut rest = r;
            for j in (0..d - 1).rev() {
                outer *= weights[j][rest % counts[j]];
                rest /= counts[j];
            }
            outer
                * chunk
                    .iter()
                    .zip(&weights[d - 1])
                    .map(|(v, w)| w * v.abs().powf(p))
                    .sum::<f64>()
        })
        .collect();
    partial.iter().sum()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HardyReport {
    pub q: Exponent,
    #[serde(rename = "Q")]
    pub big_q: Exponent,
    pub axes: Vec<usize>,
    pub h: Vec<f64>,
    pub lhs: f64,
    pub rhs_core: f64,
    pub ratio: f64,
}

fn finite_pair(q: &Exponent, big_q: &Exponent) -> Result<(f64, f64)> {
    let one = Exponent::one();
    if !q.is_finite() || !big_q.is_finite() || *q <= one || q > big_q {
        return Err(Error::Parameter(format!(
            "need 1 < q <= Q < inf, got q = {q}, Q = {big_q}"
        )));
    }
    Ok((q.to_f64(), big_q.to_f64()))
}

fn safe_ratio(lhs: f64, rhs: f64) -> f64 {
    if lhs == 0.0 {
        0.0
    } else if rhs == 0.0 {
        f64::INFINITY
    } else {
        lhs / rhs
    }
}

/// Compares `|| window integral ||_Q` against
/// `(prod h)^{1/Q + 1/q'}` times the `L^{Q/q}(outer; L^q(axes))` mixed norm
/// (the plain `L^q` norm when every axis is averaged).
pub fn hardy_check(
    field: &SampledField,
    q: &Exponent,
    big_q: &Exponent,
    h: &[f64],
    axes: &[usize],
) -> Result<HardyReport> {
    let (qf, qq) = finite_pair(q, big_q)?;
    check_axes(field, axes, h)?;
    check_nonnegative(field)?;
    let (w, counts, weights) = window_grid(field, axes, h);
    let lhs = weighted_power_sum(&w, &counts, &weights, qq).powf(1.0 / qq);
    let mixed = if axes.len() == field.dim() {
        field.lp_sum(qf).powf(1.0 / qf)
    } else {
        mixed_norm(field, axes, qf, qq)
    };
    let conj = 1.0 - 1.0 / qf;
    let rhs_core = h.iter().product::<f64>().powf(1.0 / qq + conj) * mixed;
    Ok(HardyReport {
        q: q.clone(),
        big_q: big_q.clone(),
        axes: axes.to_vec(),
        h: h.to_vec(),
        lhs,
        rhs_core,
        ratio: safe_ratio(lhs, rhs_core),
    })
}

/// `( int_outer ( int_inner F^q )^{Q/q} )^{1/Q}` with `inner = axes`.
fn mixed_norm(field: &SampledField, axes: &[usize], q: f64, big_q: f64) -> f64 {
    let d = field.dim();
    let weights: Vec<Vec<f64>> = (0..d)
        .map(|j| trapezoid_weights(field.counts()[j], field.spacing()[j]))
        .collect();
    let outer_axes: Vec<usize> = (0..d).filter(|j| !axes.contains(j)).collect();
    let outer_len: usize = outer_axes.iter().map(|&j| field.counts()[j]).product();
    let mut inner = vec![0.0; outer_len];
    for (flat, v) in field.values().iter().enumerate() {
        let idx = field.multi_index(flat);
        let mut key = 0;
        let mut w = 1.0;
        for j in 0..d {
            if axes.contains(&j) {
                w *= weights[j][idx[j]];
            } else {
                key = key * field.counts()[j] + idx[j];
            }
        }
        inner[key] += w * v.re.powf(q);
    }
    let mut total = 0.0;
    for (key, s) in inner.iter().enumerate() {
        let mut rest = key;
        let mut w = 1.0;
        for &j in outer_axes.iter().rev() {
            w *= weights[j][rest % field.counts()[j]];
            rest /= field.counts()[j];
        }
        total += w * s.powf(big_q / q);
    }
    total.powf(1.0 / big_q)
}

/// Deterministic source of nonnegative test fields indexed by trial number.
pub trait FieldSource: Sync {
    fn field(&self, trial: usize) -> Result<SampledField>;
}

/// The same field for every trial.
pub struct FixedField(pub SampledField);

impl FieldSource for FixedField {
    fn field(&self, _trial: usize) -> Result<SampledField> {
        Ok(self.0.clone())
    }
}

/// Piecewise-constant fields on `[0,1]^d`: each trial draws a dyadic level
/// per axis and uniform heights in `[0,1)` on the resulting cells.
#[derive(Clone, Debug)]
pub struct RandomPiecewiseConstant {
    pub d: usize,
    pub seed: u64,
    pub points: usize,
    pub max_level: u32,
}

impl RandomPiecewiseConstant {
    pub fn new(d: usize, seed: u64) -> Self {
        let points = match d {
            1 => 257,
            2 => 65,
            _ => 17,
        };
        RandomPiecewiseConstant {
            d,
            seed,
            points,
            max_level: 4,
        }
    }
}

impl FieldSource for RandomPiecewiseConstant {
    fn field(&self, trial: usize) -> Result<SampledField> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial as u64);
        let levels: Vec<u32> = (0..self.d).map(|_| rng.gen_range(0..=self.max_level)).collect();
        let cells: Vec<usize> = levels.iter().map(|&l| 1usize << l).collect();
        let heights: Vec<f64> = (0..cells.iter().product::<usize>()).map(|_| rng.gen::<f64>()).collect();
        let n = self.points;
        let spacing = 1.0 / (n - 1) as f64;
        SampledField::from_fn(vec![0.0; self.d], vec![spacing; self.d], vec![n; self.d], |x| {
            let mut idx = 0;
            for j in 0..x.len() {
                let c = ((x[j] * cells[j] as f64).floor() as usize).min(cells[j] - 1);
                idx = idx * cells[j] + c;
            }
            Complex64::new(heights[idx], 0.0)
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmpiricalRow {
    pub trial: usize,
    pub h: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmpiricalReport {
    pub q: Exponent,
    #[serde(rename = "Q")]
    pub big_q: Exponent,
    pub axes: Vec<usize>,
    pub trials: usize,
    pub sup: f64,
    pub rows: Vec<EmpiricalRow>,
}

impl EmpiricalReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("trial,h,ratio\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{}\n", r.trial, r.h, r.ratio));
        }
        out
    }
}

/// Supremum of the Hardy ratio over `trials` fields from `source` and all
/// half-widths in `h_list` (applied to every averaged axis).
pub fn empirical_constant(
    source: &dyn FieldSource,
    q: &Exponent,
    big_q: &Exponent,
    axes: &[usize],
    h_list: &[f64],
    trials: usize,
) -> Result<EmpiricalReport> {
    finite_pair(q, big_q)?;
    if trials == 0 || h_list.is_empty() {
        return Err(Error::Parameter("need at least one trial and one step".into()));
    }
    let rows: Vec<Vec<EmpiricalRow>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let field = source.field(trial)?;
            h_list
                .iter()
                .map(|&h| {
                    let r = hardy_check(&field, q, big_q, &vec![h; axes.len()], axes)?;
                    Ok(EmpiricalRow {
                        trial,
                        h,
                        ratio: r.ratio,
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let rows: Vec<EmpiricalRow> = rows.into_iter().flatten().collect();
    let sup = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(EmpiricalReport {
        q: q.clone(),
        big_q: big_q.clone(),
        axes: axes.to_vec(),
        trials,
        sup,
        rows,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LemmaStarReport {
    pub q: Exponent,
    pub h: Vec<f64>,
    pub lhs_sup: f64,
    pub bound: f64,
    pub ratio: f64,
}

/// `max |Delta_h f|` against `2^{d/q'} (prod h)^{1/q'} || D^1 f ||_q`, with
/// the mixed derivative taken by grid differences.
pub fn lemma_star_check(field: &SampledField, q: &Exponent, h: &[f64]) -> Result<LemmaStarReport> {
    if !q.is_finite() || *q <= Exponent::one() {
        return Err(Error::Parameter(format!("need 1 < q < inf, got {q}")));
    }
    if h.len() != field.dim() {
        return Err(Error::Dimension(h.len(), "one step per axis is required"));
    }
    let spec = DifferenceSpec::full(h.to_vec())?;
    let lhs_sup = field.difference_norm(&spec, &Exponent::Infinite)?;
    let deriv = field.grid_derivative(&EtaVector::ones(field.dim())?)?;
    let conj = 1.0 - 1.0 / q.to_f64();
    let d = field.dim() as f64;
    let bound = 2f64.powf(d * conj) * h.iter().product::<f64>().powf(conj) * deriv.lp_norm(q);
    Ok(LemmaStarReport {
        q: q.clone(),
        h: h.to_vec(),
        lhs_sup,
        bound,
        ratio: safe_ratio(lhs_sup, bound),
    })
}

/// Zero field with the shape of `like`.
pub fn zero_like(like: &SampledField) -> SampledField {
    like.map(|_| Complex64::zero())
}
