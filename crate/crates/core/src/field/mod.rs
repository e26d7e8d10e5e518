//! Complex-valued samples on uniform tensor grids in up to three dimensions.
//!
//! A [`SampledField`] stands for the function obtained by multilinear
//! interpolation inside its box and zero extension outside it. All
//! difference, derivative and norm operations act on that function.

mod io;

pub use io::{read_csv_1d, read_wfield, write_wfield, ValueKind};

use num_complex::Complex64;
use num_traits::Zero;
use rayon::prelude::*;

use crate::criteria::EtaVector;
use crate::error::{Error, Result};
use crate::exponent::Exponent;

/// Largest grid (in points) any operation will allocate.
pub const MAX_GRID_POINTS: usize = 1 << 26;

const EDGE_TOL: f64 = 1e-9;

/// A function that can be evaluated pointwise on `R^d`.
pub trait ScalarField: Sync {
    fn dim(&self) -> usize;
    fn value_at(&self, x: &[f64]) -> Complex64;
}

#[derive(Clone, Debug, PartialEq)]
pub struct SampledField {
    origin: Vec<f64>,
    spacing: Vec<f64>,
    counts: Vec<usize>,
    values: Vec<Complex64>,
}

/// `Delta_u^{eta, r}`: order-`r` symmetric differences along the axes of `eta`.
#[derive(Clone, Debug, PartialEq)]
pub struct DifferenceSpec {
    pub eta: EtaVector,
    pub order: u32,
    pub steps: Vec<f64>,
}

impl DifferenceSpec {
    pub fn new(eta: EtaVector, order: u32, steps: Vec<f64>) -> Result<Self> {
        if order == 0 {
            return Err(Error::Parameter("difference order must be at least 1".into()));
        }
        if steps.len() != eta.dim() {
            return Err(Error::Dimension(steps.len(), "one step per axis is required"));
        }
        for j in eta.axes() {
            if !(steps[j] > 0.0 && steps[j].is_finite()) {
                return Err(Error::Parameter(format!(
                    "step on axis {j} must be positive, got {}",
                    steps[j]
                )));
            }
        }
        Ok(DifferenceSpec { eta, order, steps })
    }

    /// First-order difference along every axis.
    pub fn full(steps: Vec<f64>) -> Result<Self> {
        let d = steps.len();
        if d == 0 || d > 3 {
            return Err(Error::Dimension(d, "fields have 1 to 3 axes"));
        }
        Self::new(EtaVector::ones(d)?, 1, steps)
    }
}

fn binomial(r: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (r - i) as f64 / (i + 1) as f64)
}

/// Multilinear interpolation on a line at fractional index `pos`; zero outside.
fn interp_line(line: &[Complex64], pos: f64) -> Complex64 {
    let n = line.len();
    let last = (n - 1) as f64;
    if !(-EDGE_TOL..=last + EDGE_TOL).contains(&pos) {
        return Complex64::zero();
    }
    let pos = pos.clamp(0.0, last);
    let m = (pos.floor() as usize).min(n - 2);
    let w = pos - m as f64;
    line[m] * (1.0 - w) + line[m + 1] * w
}

/// Applies `op` to every line along `axis`, producing lines of length `out_len`.
fn map_axis<F>(values: &[Complex64], counts: &[usize], axis: usize, out_len: usize, op: F) -> Vec<Complex64>
where
    F: Fn(&[Complex64], &mut [Complex64]) + Sync,
{
    let n = counts[axis];
    let inner: usize = counts[axis + 1..].iter().product();
    let mut out = vec![Complex64::zero(); values.len() / n * out_len];
    out.par_chunks_mut(out_len * inner)
        .zip(values.par_chunks(n * inner))
        .for_each(|(dst, src)| {
            let mut line = vec![Complex64::zero(); n];
            let mut res = vec![Complex64::zero(); out_len];
            for i in 0..inner {
                for (k, v) in line.iter_mut().enumerate() {
                    *v = src[k * inner + i];
                }
                op(&line, &mut res);
                for (k, v) in res.iter().enumerate() {
                    dst[k * inner + i] = *v;
                }
            }
        });
    out
}

/// Trapezoid weights of a uniform axis.
pub(crate) fn trapezoid_weights(n: usize, h: f64) -> Vec<f64> {
    let mut w = vec![h; n];
    w[0] = h / 2.0;
    w[n - 1] = h / 2.0;
    w
}

impl SampledField {
    pub fn new(origin: Vec<f64>, spacing: Vec<f64>, counts: Vec<usize>, values: Vec<Complex64>) -> Result<Self> {
        let d = counts.len();
        if d == 0 || d > 3 {
            return Err(Error::Dimension(d, "fields have 1 to 3 axes"));
        }
        if origin.len() != d || spacing.len() != d {
            return Err(Error::Field(
                "origin, spacing and counts must have the same length".into(),
            ));
        }
        if let Some(j) = (0..d).find(|&j| !(spacing[j] > 0.0 && spacing[j].is_finite())) {
            return Err(Error::Field(format!(
                "spacing on axis {j} must be positive, got {}",
                spacing[j]
            )));
        }
        if let Some(j) = (0..d).find(|&j| !origin[j].is_finite()) {
            return Err(Error::Field(format!("origin on axis {j} is not finite")));
        }
        if let Some(j) = (0..d).find(|&j| counts[j] < 2) {
            return Err(Error::GridTooSmall {
                axis: j,
                count: counts[j],
                needed: 2,
            });
        }
        let total = counts.iter().try_fold(1usize, |acc, &n| acc.checked_mul(n));
        match total {
            Some(t) if t == values.len() => {}
            Some(t) => {
                return Err(Error::Field(format!("expected {t} values, got {}", values.len())));
            }
            None => return Err(Error::Field("grid size overflows".into())),
        }
        Ok(SampledField {
            origin,
            spacing,
            counts,
            values,
        })
    }

    /// Samples `f` at the grid points `origin + k * spacing`.
    pub fn from_fn<F>(origin: Vec<f64>, spacing: Vec<f64>, counts: Vec<usize>, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Complex64 + Sync,
    {
        let total: usize = counts.iter().product();
        if total > MAX_GRID_POINTS {
            return Err(Error::MemoryBudget {
                points: total,
                budget: MAX_GRID_POINTS,
                suggested: 0,
            });
        }
        let shape = SampledField {
            origin,
            spacing,
            counts,
            values: Vec::new(),
        };
        let values = (0..total).into_par_iter().map(|i| f(&shape.point(i))).collect();
        let SampledField {
            origin,
            spacing,
            counts,
            ..
        } = shape;
        Self::new(origin, spacing, counts, values)
    }

    /// Samples `f` on the box `[lo, hi]` with `counts` points per axis, endpoints included.
    pub fn sample(f: &dyn ScalarField, lo: &[f64], hi: &[f64], counts: &[usize]) -> Result<Self> {
        let d = counts.len();
        if f.dim() != d || lo.len() != d || hi.len() != d {
            return Err(Error::Dimension(d, "box and function dimensions differ"));
        }
        if let Some(j) =
            (0..d).find(|&j| counts[j] < 2 || hi[j].partial_cmp(&lo[j]) != Some(std::cmp::Ordering::Greater))
        {
            return Err(Error::Field(format!("axis {j} needs hi > lo and at least 2 points")));
        }
        let spacing = (0..d).map(|j| (hi[j] - lo[j]) / (counts[j] - 1) as f64).collect();
        Self::from_fn(lo.to_vec(), spacing, counts.to_vec(), |x| f.value_at(x))
    }

    pub fn dim(&self) -> usize {
        self.counts.len()
    }

    pub fn origin(&self) -> &[f64] {
        &self.origin
    }

    pub fn spacing(&self) -> &[f64] {
        &self.spacing
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Upper corner of the box.
    pub fn upper(&self) -> Vec<f64> {
        (0..self.dim())
            .map(|j| self.origin[j] + (self.counts[j] - 1) as f64 * self.spacing[j])
            .collect()
    }

    /// Side lengths of the box.
    pub fn extent(&self) -> Vec<f64> {
        (0..self.dim())
            .map(|j| (self.counts[j] - 1) as f64 * self.spacing[j])
            .collect()
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    /// Multi-index of a flat (row-major) position.
    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim()];
        for j in (0..self.dim()).rev() {
            idx[j] = flat % self.counts[j];
            flat /= self.counts[j];
        }
        idx
    }

    /// Coordinates of the grid point with flat index `flat`.
    pub fn point(&self, flat: usize) -> Vec<f64> {
        self.multi_index(flat)
            .iter()
            .enumerate()
            .map(|(j, &k)| self.origin[j] + k as f64 * self.spacing[j])
            .collect()
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64 + Sync) -> SampledField {
        SampledField {
            values: self.values.par_iter().map(|v| f(*v)).collect(),
            ..self.clone()
        }
    }

    pub fn scaled(&self, c: Complex64) -> SampledField {
        self.map(|v| v * c)
    }

    /// Pointwise `a * self + b * other` on the same grid.
    pub fn combine(&self, a: Complex64, other: &SampledField, b: Complex64) -> Result<SampledField> {
        if self.counts != other.counts || self.origin != other.origin || self.spacing != other.spacing {
            return Err(Error::Field("fields live on different grids".into()));
        }
        Ok(SampledField {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(x, y)| a * x + b * y)
                .collect(),
            ..self.clone()
        })
    }

    /// Multilinear interpolation; exactly zero outside the box.
    pub fn evaluate(&self, x: &[f64]) -> Complex64 {
        let d = self.dim();
        if x.len() != d {
            return Complex64::zero();
        }
        let mut base = 0usize;
        let mut fracs = [0.0f64; 3];
        let mut strides = [0usize; 3];
        let mut stride = 1usize;
        for j in (0..d).rev() {
            let n = self.counts[j];
            let last = (n - 1) as f64;
            let pos = (x[j] - self.origin[j]) / self.spacing[j];
            if !(-EDGE_TOL..=last + EDGE_TOL).contains(&pos) {
                return Complex64::zero();
            }
            let pos = pos.clamp(0.0, last);
            let m = (pos.floor() as usize).min(n - 2);
            fracs[j] = pos - m as f64;
            strides[j] = stride;
            base += m * stride;
            stride *= n;
        }
        let mut acc = Complex64::zero();
        for corner in 0..(1usize << d) {
            let mut w = 1.0;
            let mut off = 0;
            for j in 0..d {
                if corner >> j & 1 == 1 {
                    w *= fracs[j];
                    off += strides[j];
                } else {
                    w *= 1.0 - fracs[j];
                }
            }
            if w != 0.0 {
                acc += self.values[base + off] * w;
            }
        }
        acc
    }

    /// `sum_k C(r,k) (-1)^k f(x + (2k - r) u e_j)`.
    pub fn one_sided_difference(&self, axis: usize, step: f64, order: u32, x: &[f64]) -> Complex64 {
        let mut y = x.to_vec();
        (0..=order)
            .map(|k| {
                y[axis] = x[axis] + (2.0 * k as f64 - order as f64) * step;
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                self.evaluate(&y) * (sign * binomial(order, k))
            })
            .sum()
    }

    /// Product of the one-sided differences over the axes of `spec.eta`.
    pub fn mixed_difference(&self, spec: &DifferenceSpec, x: &[f64]) -> Result<Complex64> {
        if spec.eta.dim() != self.dim() || x.len() != self.dim() {
            return Err(Error::Dimension(spec.eta.dim(), "difference spec must match the field"));
        }
        let axes = spec.eta.axes();
        let mut y = x.to_vec();
        Ok(self.nested_difference(&axes, spec, &mut y))
    }

    fn nested_difference(&self, axes: &[usize], spec: &DifferenceSpec, y: &mut [f64]) -> Complex64 {
        let Some((&j, rest)) = axes.split_first() else {
            return self.evaluate(y);
        };
        let x0 = y[j];
        let r = spec.order;
        let mut acc = Complex64::zero();
        for k in 0..=r {
            y[j] = x0 + (2.0 * k as f64 - r as f64) * spec.steps[j];
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            acc += self.nested_difference(rest, spec, y) * (sign * binomial(r, k));
        }
        y[j] = x0;
        acc
    }

    /// The difference field `Delta_u^{eta,r} f` sampled on the grid extended
    /// far enough along each differenced axis to contain its support.
    pub fn difference_field(&self, spec: &DifferenceSpec) -> Result<SampledField> {
        if spec.eta.dim() != self.dim() {
            return Err(Error::Dimension(spec.eta.dim(), "difference spec must match the field"));
        }
        let mut counts = self.counts.clone();
        let mut origin = self.origin.clone();
        let mut pad = vec![0usize; self.dim()];
        for j in spec.eta.axes() {
            let k = (spec.order as f64 * spec.steps[j] / self.spacing[j]).ceil() + 1.0;
            if k * 2.0 + counts[j] as f64 > MAX_GRID_POINTS as f64 {
                return Err(Error::MemoryBudget {
                    points: usize::MAX,
                    budget: MAX_GRID_POINTS,
                    suggested: 0,
                });
            }
            pad[j] = k as usize;
            counts[j] += 2 * pad[j];
            origin[j] -= pad[j] as f64 * self.spacing[j];
        }
        let total = counts.iter().try_fold(1usize, |a, &n| a.checked_mul(n));
        if total.is_none_or(|t| t > MAX_GRID_POINTS) {
            return Err(Error::MemoryBudget {
                points: total.unwrap_or(usize::MAX),
                budget: MAX_GRID_POINTS,
                suggested: 0,
            });
        }
        let mut values = self.values.clone();
        let mut cur = self.counts.clone();
        for j in spec.eta.axes() {
            let shift = spec.steps[j] / self.spacing[j];
            let (p, r) = (pad[j] as f64, spec.order);
            let coeffs: Vec<(f64, f64)> = (0..=r)
                .map(|k| {
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    (sign * binomial(r, k), (2.0 * k as f64 - r as f64) * shift)
                })
                .collect();
            values = map_axis(&values, &cur, j, counts[j], |line, out| {
                for (o, v) in out.iter_mut().enumerate() {
                    let pos = o as f64 - p;
                    *v = coeffs.iter().map(|(c, s)| interp_line(line, pos + s) * *c).sum();
                }
            });
            cur[j] = counts[j];
        }
        SampledField::new(origin, self.spacing.clone(), counts, values)
    }

    /// `||Delta_u^{eta,r} f||_p`. Along axes where `2 u_j` exceeds the box
    /// width the shifted copies have disjoint supports and the norm is
    /// obtained from the undifferenced field without extending the grid.
    pub fn difference_norm(&self, spec: &DifferenceSpec, p: &Exponent) -> Result<f64> {
        if spec.eta.dim() != self.dim() {
            return Err(Error::Dimension(spec.eta.dim(), "difference spec must match the field"));
        }
        let extent = self.extent();
        let r = spec.order;
        let mut narrow = spec.eta;
        let mut factor = 1.0f64;
        for j in spec.eta.axes() {
            if 2.0 * spec.steps[j] >= extent[j] {
                narrow = narrow.without(j);
                factor *= match p {
                    Exponent::Infinite => (0..=r).map(|k| binomial(r, k)).fold(0.0, f64::max),
                    Exponent::Finite(_) => {
                        let pf = p.to_f64();
                        (0..=r).map(|k| binomial(r, k).powf(pf)).sum::<f64>().powf(1.0 / pf)
                    }
                };
            }
        }
        let base = if narrow.is_zero() {
            self.lp_norm(p)
        } else {
            let spec = DifferenceSpec {
                eta: narrow,
                order: r,
                steps: spec.steps.clone(),
            };
            self.difference_field(&spec)?.lp_norm(p)
        };
        Ok(base * factor)
    }

    /// `sum w |f|^p` with trapezoid weights; reductions run in a fixed order.
    pub fn lp_sum(&self, p: f64) -> f64 {
        let d = self.dim();
        let weights: Vec<Vec<f64>> = (0..d)
            .map(|j| trapezoid_weights(self.counts[j], self.spacing[j]))
            .collect();
        let row = *self.counts.last().unwrap();
        let partial: Vec<f64> = self
            .values
            .par_chunks(row)
            .enumerate()
            .map(|(r, chunk)| {
                let mut outer = 1.0;
                let mut rest = r;
                for j in (0..d - 1).rev() {
                    outer *= weights[j][rest % self.counts[j]];
                    rest /= self.counts[j];
                }
                let last = &weights[d - 1];
                outer * chunk.iter().zip(last).map(|(v, w)| w * v.norm().powf(p)).sum::<f64>()
            })
            .collect();
        partial.iter().sum()
    }

    /// Trapezoid approximation of `(int |f|^p)^{1/p}`; `max |f|` for `p = inf`.
    pub fn lp_norm(&self, p: &Exponent) -> f64 {
        match p {
            Exponent::Infinite => self.sup_norm(),
            Exponent::Finite(_) => {
                let pf = p.to_f64();
                self.lp_sum(pf).powf(1.0 / pf)
            }
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Second-order finite-difference approximation of `D^eta f`: central
    /// in the interior, one-sided three-point at the ends.
    pub fn grid_derivative(&self, eta: &EtaVector) -> Result<SampledField> {
        if eta.dim() != self.dim() {
            return Err(Error::Dimension(eta.dim(), "eta must match the field"));
        }
        if let Some(j) = eta.axes().into_iter().find(|&j| self.counts[j] < 5) {
            return Err(Error::GridTooSmall {
                axis: j,
                count: self.counts[j],
                needed: 5,
            });
        }
        let mut values = self.values.clone();
        for j in eta.axes() {
            let h2 = 2.0 * self.spacing[j];
            let n = self.counts[j];
            values = map_axis(&values, &self.counts, j, n, |g, out| {
                out[0] = (g[0] * -3.0 + g[1] * 4.0 - g[2]) / h2;
                out[n - 1] = (g[n - 1] * 3.0 - g[n - 2] * 4.0 + g[n - 3]) / h2;
                for k in 1..n - 1 {
                    out[k] = (g[k + 1] - g[k - 1]) / h2;
                }
            });
        }
        Ok(SampledField { values, ..self.clone() })
    }
}

impl ScalarField for SampledField {
    fn dim(&self) -> usize {
        self.counts.len()
    }

    fn value_at(&self, x: &[f64]) -> Complex64 {
        self.evaluate(x)
    }
}
