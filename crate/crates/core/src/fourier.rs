//! A-norm estimates from discrete Fourier transforms of truncated samplings.
//!
//! The function is sampled on `[-R, R)^d` with `N` points per axis,
//! transformed with the continuum normalization `F = spacing^d * DFT`, and
//! `(2 pi)^{-d} sum |F| dxi^d` is reported as the estimate of `||f||_A`.
//! These numbers are trend evidence, not certificates.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::ScalarField;

/// Largest number of grid points (`N^d`) a single transform may use.
pub const MEMORY_BUDGET: usize = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FourierEstimate {
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub l1_estimate: f64,
    pub parseval_residual: f64,
}

fn check_grid(d: usize, n: usize) -> Result<()> {
    if d == 0 || d > 3 {
        return Err(Error::Dimension(d, "transforms are available for 1 <= d <= 3"));
    }
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    let points = n.checked_pow(d as u32).unwrap_or(usize::MAX);
    if points > MEMORY_BUDGET {
        let suggested = 1usize << ((MEMORY_BUDGET.ilog2() as usize) / d);
        return Err(Error::MemoryBudget {
            points,
            budget: MEMORY_BUDGET,
            suggested,
        });
    }
    Ok(())
}

/// Samples of `f` at `-R + k * (2R/N)` in row-major order.
pub fn sample_box(f: &dyn ScalarField, r: f64, n: usize) -> Result<Vec<Complex64>> {
    let d = f.dim();
    check_grid(d, n)?;
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Parameter(format!("truncation radius must be positive, got {r}")));
    }
    let step = 2.0 * r / n as f64;
    let total = n.pow(d as u32);
    Ok((0..total)
        .into_par_iter()
        .map(|mut flat| {
            let mut x = [0.0; 3];
            for j in (0..d).rev() {
                x[j] = -r + (flat % n) as f64 * step;
                flat /= n;
            }
            f.value_at(&x[..d])
        })
        .collect())
}

/// Unnormalized forward DFT along every axis of an `n^d` row-major array.
pub fn dft_nd(values: &mut [Complex64], d: usize, n: usize) {
    let fft = FftPlanner::new().plan_fft_forward(n);
    for axis in 0..d {
        let inner = n.pow((d - 1 - axis) as u32);
        if inner == 1 {
            values.par_chunks_mut(n).for_each(|line| fft.process(line));
            continue;
        }
        values.par_chunks_mut(n * inner).for_each(|block| {
            let mut line = vec![Complex64::new(0.0, 0.0); n];
            for i in 0..inner {
                for (k, v) in line.iter_mut().enumerate() {
                    *v = block[k * inner + i];
                }
                fft.process(&mut line);
                for (k, v) in line.iter().enumerate() {
                    block[k * inner + i] = *v;
                }
            }
        });
    }
}

/// The transform `F(xi) = int f(x) e^{-i x xi} dx` on the DFT frequency
/// grid, up to the unimodular phase from the box offset.
pub fn truncated_transform(f: &dyn ScalarField, r: f64, n: usize) -> Result<Vec<Complex64>> {
    let mut v = sample_box(f, r, n)?;
    dft_nd(&mut v, f.dim(), n);
    let scale = (2.0 * r / n as f64).powi(f.dim() as i32);
    v.iter_mut().for_each(|z| *z *= scale);
    Ok(v)
}

pub fn truncated_fourier_l1(f: &dyn ScalarField, r: f64, n: usize) -> Result<FourierEstimate> {
    let d = f.dim() as i32;
    let samples = sample_box(f, r, n)?;
    let step = 2.0 * r / n as f64;
    let energy: f64 = samples.iter().map(|z| z.norm_sqr()).sum::<f64>() * step.powi(d);
    let mut spectrum = samples;
    dft_nd(&mut spectrum, d as usize, n);
    let scale = step.powi(d);
    let dxi = 2.0 * PI / (n as f64 * step);
    let norm = (dxi / (2.0 * PI)).powi(d);
    let partial: Vec<(f64, f64)> = spectrum
        .par_chunks(n)
        .map(|c| {
            c.iter().fold((0.0, 0.0), |(a, b), z| {
                let m = z.norm() * scale;
                (a + m, b + m * m)
            })
        })
        .collect();
    let (l1, l2): (f64, f64) = partial.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let l1_estimate = l1 * norm;
    let parseval_residual = if energy == 0.0 {
        0.0
    } else {
        (energy - l2 * norm).abs() / energy
    };
    Ok(FourierEstimate {
        r,
        n,
        l1_estimate,
        parseval_residual,
    })
}

/// Smallest power of two `N` with `2R/N <= max_spacing`.
pub fn grid_points_for(r: f64, max_spacing: f64) -> Result<usize> {
    if !(max_spacing > 0.0 && r > 0.0) {
        return Err(Error::Parameter("radius and spacing must be positive".into()));
    }
    let need = (2.0 * r / max_spacing).ceil();
    if need > (1u64 << 40) as f64 {
        return Err(Error::Parameter(format!(
            "spacing {max_spacing} is too fine for R = {r}"
        )));
    }
    Ok((need as usize).max(2).next_power_of_two())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TrendClass {
    Converged,
    Growing,
    Inconclusive,
}

impl TrendClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            TrendClass::Converged => "converged",
            TrendClass::Growing => "growing",
            TrendClass::Inconclusive => "inconclusive",
        }
    }
}

/// Slope below `converged` means converged, above `growing` means growing.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TrendThresholds {
    pub converged: f64,
    pub growing: f64,
}

impl Default for TrendThresholds {
    fn default() -> Self {
        TrendThresholds {
            converged: 0.05,
            growing: 0.1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ATrend {
    pub entries: Vec<FourierEstimate>,
    pub slope: f64,
    pub classification: TrendClass,
    pub thresholds: TrendThresholds,
    pub evidence: &'static str,
}

impl ATrend {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("R,N,l1,parseval_residual\n");
        for e in &self.entries {
            let _ = writeln!(out, "{},{},{},{}", e.r, e.n, e.l1_estimate, e.parseval_residual);
        }
        out
    }
}

/// Least-squares slope of `log y` against `log x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let logs: Vec<(f64, f64)> = points.iter().map(|(x, y)| (x.ln(), y.ln())).collect();
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let num: f64 = logs.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = logs.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    num / den
}

/// l1 estimates over the truncation ladder `radii`, with `N` chosen so the
/// sample spacing stays at most `max_spacing`; the slope is fitted over the
/// last three entries.
pub fn a_norm_trend(
    f: &dyn ScalarField,
    radii: &[f64],
    max_spacing: f64,
    thresholds: TrendThresholds,
) -> Result<ATrend> {
    if radii.len() < 2 {
        return Err(Error::Parameter("the ladder needs at least two radii".into()));
    }
    if radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Parameter("radii must be strictly increasing".into()));
    }
    let plan: Vec<(f64, usize)> = radii
        .iter()
        .map(|&r| Ok((r, grid_points_for(r, max_spacing)?)))
        .collect::<Result<_>>()?;
    for &(_, n) in &plan {
        check_grid(f.dim(), n)?;
    }
    let entries: Vec<FourierEstimate> = plan
        .par_iter()
        .map(|&(r, n)| truncated_fourier_l1(f, r, n))
        .collect::<Result<_>>()?;
    let tail = &entries[entries.len().saturating_sub(3)..];
    let pts: Vec<(f64, f64)> = tail.iter().map(|e| (e.r, e.l1_estimate)).collect();
    let slope = if pts.iter().any(|p| p.1 <= 0.0) {
        0.0
    } else {
        log_log_slope(&pts)
    };
    let classification = if slope > thresholds.growing {
        TrendClass::Growing
    } else if slope < thresholds.converged {
        TrendClass::Converged
    } else {
        TrendClass::Inconclusive
    };
    Ok(ATrend {
        entries,
        slope,
        classification,
        thresholds,
        evidence: "trend evidence",
    })
}
