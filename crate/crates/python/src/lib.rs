//! Python bindings. Exact rationals cross the boundary as strings like `"3/7"`;
//! structured reports come back as plain dicts and lists.

use ahlab_core::exactlinalg::{FieldConfig, DEFAULT_PRIME};
use ahlab_core::interpolation::{self, Sampling};
use ahlab_core::polyspace::parse_rational;
use ahlab_core::sylvester;
use ahlab_core::verifier::{self, CaseId};
use ahlab_core::witness;
use num_complex::Complex64;
use num_rational::BigRational;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyAny;
use serde::Serialize;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py, T: Serialize>(py: Python<'py>, v: &T) -> PyResult<Bound<'py, PyAny>> {
    let s = serde_json::to_string(v).map_err(err)?;
    py.import("json")?.call_method1("loads", (s,))
}

fn sampling(field: &str, prime: Option<u64>, seed: u64, trials: usize) -> PyResult<Sampling> {
    let field = match (field, prime) {
        ("q" | "Q" | "rationals", None) => FieldConfig::rationals(),
        ("q" | "Q" | "rationals", Some(_)) => return Err(err("prime given with field 'q'")),
        ("prime", p) => FieldConfig::prime(p.unwrap_or(DEFAULT_PRIME)).map_err(err)?,
        (other, _) => return Err(err(format!("unknown field {other:?}; use 'prime' or 'q'"))),
    };
    if trials == 0 {
        return Err(err("trials must be at least 1"));
    }
    Ok(Sampling::new(field, seed).with_trials(trials))
}

fn rational(v: &Bound<'_, PyAny>) -> PyResult<BigRational> {
    if let Ok(i) = v.extract::<i64>() {
        return Ok(BigRational::from_integer(i.into()));
    }
    let s: String = v.str()?.extract()?;
    parse_rational(s.trim()).map_err(err)
}

/// Hilbert function of `k` general double points of `P^n` in degree `d`.
#[pyclass(module = "ahlab", frozen)]
struct HilbertReport(interpolation::HilbertReport);

#[pymethods]
impl HilbertReport {
    #[getter]
    fn n(&self) -> usize {
        self.0.case.n
    }
    #[getter]
    fn d(&self) -> usize {
        self.0.case.d
    }
    #[getter]
    fn k(&self) -> usize {
        self.0.case.k
    }
    #[getter]
    fn expected(&self) -> u64 {
        self.0.expected
    }
    #[getter]
    fn computed(&self) -> u64 {
        self.0.computed
    }
    #[getter]
    fn defect(&self) -> u64 {
        self.0.defect
    }
    /// "independent", "fills" or "defective-evidence".
    #[getter]
    fn verdict(&self) -> PyResult<String> {
        serde_json::to_value(self.0.verdict)
            .ok()
            .and_then(|v| v.as_str().map(str::to_owned))
            .ok_or_else(|| err("verdict"))
    }
    fn to_dict<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &self.0)
    }
    fn __repr__(&self) -> String {
        format!(
            "HilbertReport(n={}, d={}, k={}, computed={}, expected={})",
            self.0.case.n, self.0.case.d, self.0.case.k, self.0.computed, self.0.expected
        )
    }
}

#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (n, d, k, *, field = "prime", prime = None, seed = 0, trials = 3))]
fn hilbert(
    py: Python<'_>,
    n: usize,
    d: usize,
    k: usize,
    field: &str,
    prime: Option<u64>,
    seed: u64,
    trials: usize,
) -> PyResult<HilbertReport> {
    let s = sampling(field, prime, seed, trials)?;
    py.allow_threads(|| interpolation::hilbert_double_points(n, d, k, &s))
        .map(HilbertReport)
        .map_err(err)
}

/// Hilbert function of a scheme given as its JSON description.
#[pyfunction]
#[pyo3(signature = (scheme_json, d, *, field = "q", prime = None))]
fn hilbert_scheme(
    scheme_json: &str,
    d: usize,
    field: &str,
    prime: Option<u64>,
) -> PyResult<HilbertReport> {
    let s = sampling(field, prime, 0, 1)?;
    let spec = ahlab_core::schemes::SchemeSpec::from_json(scheme_json).map_err(err)?;
    interpolation::hilbert_function(&spec, d, s.field)
        .map(HilbertReport)
        .map_err(err)
}

#[pyfunction]
fn is_exception(n: usize, d: usize, k: usize) -> bool {
    verifier::is_exception(CaseId::new(n, d, k)).is_some()
}

#[pyfunction]
fn critical_k(n: usize, d: usize) -> (usize, usize) {
    verifier::critical_k(n, d)
}

#[pyfunction]
#[pyo3(signature = (n_lo, n_hi, d_lo, d_hi, *, seed = 0))]
fn sweep<'py>(
    py: Python<'py>,
    n_lo: usize,
    n_hi: usize,
    d_lo: usize,
    d_hi: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let s = sampling("prime", None, seed, 3)?;
    let rows = py
        .allow_threads(|| verifier::sweep(n_lo..=n_hi, d_lo..=d_hi, &s))
        .map_err(err)?;
    to_py(py, &rows)
}

/// An induction certificate for one case.
#[pyclass(module = "ahlab")]
struct Certificate(verifier::Certificate);

#[pymethods]
impl Certificate {
    #[new]
    fn new(n: usize, d: usize, k: usize) -> PyResult<Self> {
        verifier::build_certificate(CaseId::new(n, d, k))
            .map(Certificate)
            .map_err(err)
    }
    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        serde_json::from_str(s).map(Certificate).map_err(err)
    }
    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0).map_err(err)
    }
    fn __len__(&self) -> usize {
        self.0.nodes.len()
    }
    /// Recheck every node; returns the full report as a dict.
    #[pyo3(signature = (*, seed = 0))]
    fn check<'py>(&self, py: Python<'py>, seed: u64) -> PyResult<Bound<'py, PyAny>> {
        let s = sampling("prime", None, seed, 3)?;
        let report = py.allow_threads(|| verifier::check_certificate(&self.0, &s));
        to_py(py, &report)
    }
}

/// The exact witness form of a defective case, as a dict.
#[pyfunction]
#[pyo3(signature = (n, d, k, *, seed = 0))]
fn exception_witness<'py>(
    py: Python<'py>,
    n: usize,
    d: usize,
    k: usize,
    seed: u64,
) -> PyResult<Bound<'py, PyAny>> {
    let w = witness::exception_witness(CaseId::new(n, d, k), seed).map_err(err)?;
    to_py(py, &w)
}

/// `f = sum C(d,i) a_i x^(d-i) y^i`.
#[pyclass(module = "ahlab", frozen)]
struct BinaryForm(sylvester::BinaryForm);

#[pymethods]
impl BinaryForm {
    /// `a` holds ints or strings such as `"-3/4"`.
    #[new]
    fn new(a: Vec<Bound<'_, PyAny>>) -> PyResult<Self> {
        let a = a.iter().map(rational).collect::<PyResult<Vec<_>>>()?;
        sylvester::BinaryForm::new(a).map(BinaryForm).map_err(err)
    }
    #[getter]
    fn d(&self) -> usize {
        self.0.d
    }
    #[getter]
    fn a(&self) -> Vec<String> {
        self.0.a.iter().map(ToString::to_string).collect()
    }
    fn hankel_rank(&self) -> PyResult<usize> {
        sylvester::hankel(&self.0, self.0.d / 2)
            .map(|h| h.rank())
            .map_err(err)
    }
    fn in_secant(&self, k: usize) -> bool {
        sylvester::membership_sigma_k(&self.0, k)
    }
    /// The covariant `g` of an odd-degree form.
    fn covariant(&self) -> PyResult<BinaryForm> {
        sylvester::sylvester_g(&self.0).map(BinaryForm).map_err(err)
    }
    /// List of `(c, (l0, l1))` with `f = sum c (l0 x + l1 y)^d`.
    #[pyo3(signature = (tol = sylvester::DEFAULT_TOL))]
    fn decompose(
        &self,
        py: Python<'_>,
        tol: f64,
    ) -> PyResult<Vec<(Complex64, (Complex64, Complex64))>> {
        let dec = py
            .allow_threads(|| sylvester::decompose_odd(&self.0, tol))
            .map_err(err)?;
        Ok(dec
            .terms
            .iter()
            .map(|t| (t.c, (t.form[0], t.form[1])))
            .collect())
    }
    fn __repr__(&self) -> String {
        format!("BinaryForm([{}])", self.a().join(", "))
    }
}

#[pymodule]
fn ahlab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<HilbertReport>()?;
    m.add_class::<Certificate>()?;
    m.add_class::<BinaryForm>()?;
    m.add_function(wrap_pyfunction!(hilbert, m)?)?;
    m.add_function(wrap_pyfunction!(hilbert_scheme, m)?)?;
    m.add_function(wrap_pyfunction!(is_exception, m)?)?;
    m.add_function(wrap_pyfunction!(critical_k, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(exception_witness, m)?)?;
    Ok(())
}
