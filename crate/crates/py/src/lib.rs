//! Python bindings: the main series types and operations of the qmf engine.
//!
//! Build the extension with `cargo build -p qmf-py --release`; the smoke
//! test in python/smoke_test.py loads the resulting cdylib directly.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use qmf::exactnum::{parse_rational, rati, Rational};
use qmf::qseries::{eisenstein_level1, eta_power, hauptmodul_suite, PuiseuxSeries, SeriesContext};
use qmf::vvmf::{dim2_minimal, dim3_minimal, ExponentSet};

fn value_err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_rat(s: &str) -> PyResult<Rational> {
    parse_rational(s).ok_or_else(|| value_err(format!("bad rational {}", s)))
}

/// A truncated Puiseux q-series with exact cyclotomic coefficients.
#[pyclass(name = "Series", from_py_object)]
#[derive(Clone)]
struct PySeries {
    inner: PuiseuxSeries,
}

#[pymethods]
impl PySeries {
    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Series({})", self.inner)
    }

    /// Coefficient at the rational exponent `exp` (e.g. "1/2"), as an exact
    /// string; None when the exponent is at or beyond the precision bound.
    fn coeff(&self, exp: &str) -> PyResult<Option<String>> {
        let e = parse_rat(exp)?;
        Ok(self.inner.known_coeff(&e).map(|c| c.to_string()))
    }

    fn valuation(&self) -> Option<String> {
        self.inner.valuation().map(|v| v.to_string())
    }

    fn precision(&self) -> String {
        self.inner.precision().to_string()
    }

    fn ramification(&self) -> u64 {
        self.inner.ramification()
    }

    /// Exact JSON form (all numbers as strings).
    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    fn __add__(&self, other: &PySeries) -> PySeries {
        PySeries { inner: &self.inner + &other.inner }
    }

    fn __sub__(&self, other: &PySeries) -> PySeries {
        PySeries { inner: &self.inner - &other.inner }
    }

    fn __mul__(&self, other: &PySeries) -> PySeries {
        PySeries { inner: &self.inner * &other.inner }
    }

    /// theta = q d/dq.
    fn theta(&self) -> PySeries {
        PySeries { inner: self.inner.theta() }
    }

    fn agrees_with(&self, other: &PySeries) -> bool {
        self.inner.agrees_with(&other.inner, None)
    }
}

/// The level-1 Eisenstein series E_k to `prec` q-terms (k even, >= 2).
#[pyfunction]
#[pyo3(signature = (k, prec = 30))]
fn eisenstein(k: i64, prec: i64) -> PyResult<PySeries> {
    let ctx = SeriesContext::new(prec);
    eisenstein_level1(k, &ctx).map(|inner| PySeries { inner }).map_err(value_err)
}

/// eta^t to `prec` q-terms.
#[pyfunction]
#[pyo3(signature = (t, prec = 30))]
fn eta(t: i64, prec: i64) -> PySeries {
    let ctx = SeriesContext::new(prec);
    PySeries { inner: eta_power(t, &ctx) }
}

/// One of the weight-0 suite: "delta", "j", "K" or "A".
#[pyfunction]
#[pyo3(signature = (name, prec = 30))]
fn hauptmodul(name: &str, prec: i64) -> PyResult<PySeries> {
    let suite = hauptmodul_suite(&SeriesContext::new(prec + 4));
    let inner = match name {
        "delta" => suite.delta,
        "j" => suite.j,
        "K" => suite.k,
        "A" => suite.a,
        other => return Err(value_err(format!("unknown hauptmodul object {}", other))),
    };
    Ok(PySeries { inner })
}

/// Frobenius solution of an MLDE in the grammar "D^2 - (1/18)*E4" at the
/// indicial root `exponent`, for solutions of weight `weight`.
#[pyfunction]
#[pyo3(signature = (operator, exponent, weight = 0, prec = 30))]
fn solve_mlde(operator: &str, exponent: &str, weight: i64, prec: i64) -> PyResult<PySeries> {
    let mlde = qmf::cli::parse::parse_mlde(operator, weight).map_err(value_err)?;
    let r = parse_rat(exponent)?;
    let inner = mlde.frobenius_solve(&r, &(&r + rati(prec))).map_err(value_err)?;
    Ok(PySeries { inner })
}

fn vvmf_build(dim: usize, exponents: &[String], prec: i64) -> PyResult<qmf::vvmf::VvmfComponents> {
    let parsed: Vec<Rational> = exponents.iter().map(|s| parse_rat(s)).collect::<PyResult<_>>()?;
    let e = ExponentSet::new(parsed).map_err(value_err)?;
    match dim {
        2 => dim2_minimal(&e, prec).map_err(value_err),
        3 => dim3_minimal(&e, prec).map_err(value_err),
        _ => Err(value_err("dimension must be 2 or 3")),
    }
}

/// Minimal-weight vector-valued modular form from T-exponents; returns the
/// exact JSON record (weight, exponents, MLDE, components).
#[pyfunction]
#[pyo3(signature = (dim, exponents, prec = 30))]
fn vvmf(dim: usize, exponents: Vec<String>, prec: i64) -> PyResult<String> {
    Ok(vvmf_build(dim, &exponents, prec)?.to_json().to_string())
}

/// The i-th component of a minimal-weight vvmf, as a Series.
#[pyfunction]
#[pyo3(signature = (dim, exponents, index, prec = 30))]
fn vvmf_component(dim: usize, exponents: Vec<String>, index: usize, prec: i64) -> PyResult<PySeries> {
    let v = vvmf_build(dim, &exponents, prec)?;
    v.components
        .get(index)
        .map(|inner| PySeries { inner: inner.clone() })
        .ok_or_else(|| value_err("component index out of range"))
}

/// Run one registry identity; returns (status, witness-or-None).
#[pyfunction]
#[pyo3(signature = (name, prec = None))]
fn verify(name: &str, prec: Option<i64>) -> PyResult<(String, Option<String>)> {
    let report = qmf::cli::registry::verify(name, prec).map_err(value_err)?;
    Ok((
        report.status.to_string(),
        report.witness.map(|w| format!("{}: expected {}, got {}", w.location, w.expected, w.actual)),
    ))
}

/// All registered identity names.
#[pyfunction]
fn identities() -> Vec<String> {
    qmf::cli::registry::IDENTITIES.iter().map(|s| s.to_string()).collect()
}

/// Coefficients (low to high) of the supersingular polynomial mod p.
#[pyfunction]
#[pyo3(signature = (p, prec = 16))]
fn ss_poly(p: u64, prec: i64) -> PyResult<Vec<u64>> {
    let poly = qmf::vvmf::supersingular_polynomial(p, prec).map_err(value_err)?;
    Ok(poly.coeffs().to_vec())
}

/// dim H_k for a free basis with the given weights.
#[pyfunction]
fn dim_formula(weights: Vec<i64>, k: i64) -> u64 {
    qmf::vvmf::dim_formula(&qmf::vvmf::WeightList::new(weights), k)
}

/// The Eisenstein difference G_P - G_Q on Gamma(N) in q_N.
#[pyfunction]
#[pyo3(signature = (level, p, q, prec = 30))]
fn eis_difference(level: u64, p: &str, q: &str, prec: i64) -> PyResult<PySeries> {
    let pc = qmf::eisenstein::CuspLabel::parse(level, p).ok_or_else(|| value_err("bad cusp"))?;
    let qc = qmf::eisenstein::CuspLabel::parse(level, q).ok_or_else(|| value_err("bad cusp"))?;
    let inner = qmf::eisenstein::eis2_difference(&pc, &qc, prec).map_err(value_err)?;
    Ok(PySeries { inner })
}

#[pymodule]
fn qmf_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySeries>()?;
    m.add_function(wrap_pyfunction!(eisenstein, m)?)?;
    m.add_function(wrap_pyfunction!(eta, m)?)?;
    m.add_function(wrap_pyfunction!(hauptmodul, m)?)?;
    m.add_function(wrap_pyfunction!(solve_mlde, m)?)?;
    m.add_function(wrap_pyfunction!(vvmf, m)?)?;
    m.add_function(wrap_pyfunction!(vvmf_component, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(identities, m)?)?;
    m.add_function(wrap_pyfunction!(ss_poly, m)?)?;
    m.add_function(wrap_pyfunction!(dim_formula, m)?)?;
    m.add_function(wrap_pyfunction!(eis_difference, m)?)?;
    Ok(())
}
