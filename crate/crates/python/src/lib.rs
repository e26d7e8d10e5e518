//! Python bindings: sampled fields, the exact criteria and the numerical
//! certificates. Reports come back as plain dicts; errors raise `ValueError`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyBool, PyDict, PyList, PyString};
use serde_json::Value;

use wiener_cli::config::{Origin, RawConfig};
use wiener_core::bernstein::{bernstein_sum_nd, ScaleRange, TailSettings};
use wiener_core::criteria::{check_dim1, EtaVector};
use wiener_core::exponent::{format_rational, parse_rational};
use wiener_core::field::{read_wfield, write_wfield, DifferenceSpec, SampledField};
use wiener_core::fourier::{a_norm_trend, truncated_fourier_l1, TrendThresholds};
use wiener_core::gallery::{classify_m, construct_counterexample_params, GalleryFunction, ModelParams};
use wiener_core::hardy::{hardy_check, lemma_star_check};
use wiener_core::{Complex64, Exponent};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => PyBool::new(py, *b).to_owned().into_any(),
        Value::Number(n) => match n.as_i64() {
            Some(i) => i.into_pyobject(py)?.into_any(),
            None => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => PyString::new(py, s).into_any(),
        Value::Array(items) => {
            let list = PyList::empty(py);
            for item in items {
                list.append(to_py(py, item)?)?;
            }
            list.into_any()
        }
        Value::Object(map) => {
            let dict = PyDict::new(py);
            for (k, item) in map {
                dict.set_item(k, to_py(py, item)?)?;
            }
            dict.into_any()
        }
    })
}

fn report<'py, T: serde::Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &serde_json::to_value(v).map_err(err)?)
}

fn exponent(text: &str) -> PyResult<Exponent> {
    text.parse().map_err(err)
}

fn eta(text: &str) -> PyResult<EtaVector> {
    text.parse().map_err(err)
}

/// Complex samples on a uniform grid in up to three dimensions, zero outside the box.
#[pyclass(name = "Field", module = "wiener", frozen)]
struct PyField {
    inner: SampledField,
}

#[pymethods]
impl PyField {
    /// Real samples in row-major order.
    #[new]
    fn new(origin: Vec<f64>, spacing: Vec<f64>, counts: Vec<usize>, values: Vec<f64>) -> PyResult<Self> {
        let values = values.into_iter().map(|v| Complex64::new(v, 0.0)).collect();
        SampledField::new(origin, spacing, counts, values)
            .map(|inner| PyField { inner })
            .map_err(err)
    }

    /// Samples a gallery function ("gaussian", "hat", "m:alpha=2,beta=1.2") on `[lo, hi]^d`.
    #[staticmethod]
    #[pyo3(signature = (function, d=1, lo=-8.0, hi=8.0, points=4097))]
    fn sample(function: &str, d: usize, lo: f64, hi: f64, points: usize) -> PyResult<Self> {
        let g = GalleryFunction::parse(function, d).map_err(err)?;
        SampledField::sample(&g, &vec![lo; d], &vec![hi; d], &vec![points; d])
            .map(|inner| PyField { inner })
            .map_err(err)
    }

    #[staticmethod]
    fn from_wfield(text: &str) -> PyResult<Self> {
        read_wfield(text.as_bytes()).map(|inner| PyField { inner }).map_err(err)
    }

    fn to_wfield(&self) -> PyResult<String> {
        let mut buf = Vec::new();
        write_wfield(&self.inner, None, &mut buf).map_err(err)?;
        String::from_utf8(buf).map_err(err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn origin(&self) -> Vec<f64> {
        self.inner.origin().to_vec()
    }

    #[getter]
    fn spacing(&self) -> Vec<f64> {
        self.inner.spacing().to_vec()
    }

    #[getter]
    fn counts(&self) -> Vec<usize> {
        self.inner.counts().to_vec()
    }

    /// Samples as `(re, im)` pairs in row-major order.
    fn values(&self) -> Vec<(f64, f64)> {
        self.inner.values().iter().map(|z| (z.re, z.im)).collect()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// Multilinear interpolation; `(re, im)`.
    fn evaluate(&self, x: Vec<f64>) -> PyResult<(f64, f64)> {
        if x.len() != self.inner.dim() {
            return Err(err("point dimension does not match the field"));
        }
        let z = self.inner.evaluate(&x);
        Ok((z.re, z.im))
    }

    /// `p` is a string such as "2", "3/2" or "inf".
    fn lp_norm(&self, p: &str) -> PyResult<f64> {
        Ok(self.inner.lp_norm(&exponent(p)?))
    }

    fn grid_derivative(&self, eta_bits: &str) -> PyResult<PyField> {
        let inner = self.inner.grid_derivative(&eta(eta_bits)?).map_err(err)?;
        Ok(PyField { inner })
    }

    #[pyo3(signature = (eta_bits, steps, p, order=1))]
    fn difference_norm(&self, eta_bits: &str, steps: Vec<f64>, p: &str, order: u32) -> PyResult<f64> {
        let spec = DifferenceSpec::new(eta(eta_bits)?, order, steps).map_err(err)?;
        self.inner.difference_norm(&spec, &exponent(p)?).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!(
            "Field(d={}, counts={:?}, spacing={:?})",
            self.inner.dim(),
            self.inner.counts(),
            self.inner.spacing()
        )
    }
}

/// Verdict of the line rule for `f in L_p`, `f' in L_q`.
#[pyfunction]
fn check_line<'py>(py: Python<'py>, p: &str, q: &str) -> PyResult<Bound<'py, PyAny>> {
    report(py, &check_dim1(&exponent(p)?, &exponent(q)?))
}

/// `(alpha, beta)` as exact strings for `1/p + 1/q < 1`.
#[pyfunction]
fn counterexample_params(p: &str, q: &str) -> PyResult<(String, String)> {
    let (a, b) = construct_counterexample_params(&exponent(p)?, &exponent(q)?).map_err(err)?;
    Ok((format_rational(&a), format_rational(&b)))
}

/// Known membership of the model function in A(R^d).
#[pyfunction]
#[pyo3(signature = (alpha, beta, d=1))]
fn classify_model<'py>(py: Python<'py>, alpha: &str, beta: &str, d: usize) -> PyResult<Bound<'py, PyAny>> {
    let params = ModelParams::with_default_cutoff(
        parse_rational(alpha).map_err(err)?,
        parse_rational(beta).map_err(err)?,
        d,
    )
    .map_err(err)?;
    report(py, &classify_m(&params))
}

#[pyfunction]
#[pyo3(signature = (field, lo, hi, shells=4, delta=0.05))]
fn bernstein_sum<'py>(
    py: Python<'py>,
    field: &PyField,
    lo: i32,
    hi: i32,
    shells: usize,
    delta: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let range = ScaleRange::new(lo, hi).map_err(err)?;
    let ranges = vec![range; field.inner.dim()];
    let r = py
        .detach(|| bernstein_sum_nd(&field.inner, &ranges, TailSettings { shells, delta }))
        .map_err(err)?;
    report(py, &r)
}

/// Hardy-Steklov ratio; `axes` are 0-based.
#[pyfunction]
fn hardy<'py>(
    py: Python<'py>,
    field: &PyField,
    q: &str,
    big_q: &str,
    h: Vec<f64>,
    axes: Vec<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let r = hardy_check(&field.inner, &exponent(q)?, &exponent(big_q)?, &h, &axes).map_err(err)?;
    report(py, &r)
}

#[pyfunction]
fn lemma_star<'py>(py: Python<'py>, field: &PyField, q: &str, h: Vec<f64>) -> PyResult<Bound<'py, PyAny>> {
    report(py, &lemma_star_check(&field.inner, &exponent(q)?, &h).map_err(err)?)
}

/// Truncated l1 norm of the transform of a gallery function on `[-r, r)^d` with `n` points per axis.
#[pyfunction]
#[pyo3(signature = (function, r, n, d=1))]
fn fourier_l1<'py>(py: Python<'py>, function: &str, r: f64, n: usize, d: usize) -> PyResult<Bound<'py, PyAny>> {
    let g = GalleryFunction::parse(function, d).map_err(err)?;
    let e = py.detach(|| truncated_fourier_l1(&g, r, n)).map_err(err)?;
    report(py, &e)
}

#[pyfunction]
#[pyo3(signature = (function, radii, spacing=1.0/64.0, d=1))]
fn a_norm<'py>(
    py: Python<'py>,
    function: &str,
    radii: Vec<f64>,
    spacing: f64,
    d: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let g = GalleryFunction::parse(function, d).map_err(err)?;
    let t = py
        .detach(|| a_norm_trend(&g, &radii, spacing, TrendThresholds::default()))
        .map_err(err)?;
    report(py, &t)
}

/// Runs a CLI subcommand on a `{key: value}` config; returns `(exit_code, report)`.
#[pyfunction]
fn run<'py>(
    py: Python<'py>,
    command: &str,
    params: std::collections::BTreeMap<String, String>,
) -> PyResult<(i32, Bound<'py, PyAny>)> {
    use wiener_cli::commands;
    let mut raw = RawConfig::default();
    for (k, v) in &params {
        raw.set(k, v, Origin::Argument);
    }
    let f = match command {
        "criteria" => commands::criteria::run,
        "region" => commands::region::run,
        "bernstein" => commands::bernstein::run,
        "hardy" => commands::hardy::run,
        "gallery" => commands::gallery::run,
        "norms" => commands::norms::run,
        "anorm" => commands::anorm::run,
        other => return Err(err(format!("unknown command {other:?}"))),
    };
    let rep = py.detach(|| f(&raw)).map_err(err)?;
    let doc: Value = serde_json::from_str(&rep.to_json()).map_err(err)?;
    Ok((rep.exit, to_py(py, &doc)?))
}

#[pymodule]
fn wiener(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_function(wrap_pyfunction!(check_line, m)?)?;
    m.add_function(wrap_pyfunction!(counterexample_params, m)?)?;
    m.add_function(wrap_pyfunction!(classify_model, m)?)?;
    m.add_function(wrap_pyfunction!(bernstein_sum, m)?)?;
    m.add_function(wrap_pyfunction!(hardy, m)?)?;
    m.add_function(wrap_pyfunction!(lemma_star, m)?)?;
    m.add_function(wrap_pyfunction!(fourier_l1, m)?)?;
    m.add_function(wrap_pyfunction!(a_norm, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}
