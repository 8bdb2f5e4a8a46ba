//! Python bindings. Rationals cross the boundary as `fractions.Fraction`;
//! inputs may be anything whose `str()` is a `p/q` or integer token
//! (`Fraction`, `int`, `str`).

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::sync::PyOnceLock;
use pyo3::types::PyList;

use mopfact::bcf;
use mopfact::closed_forms::{self, ClosedFormParams};
use mopfact::gauss_borel::{AlphaSequence, Method};
use mopfact::hessenberg;
use mopfact::{cli, scalar, Error, Scalar, SystemSpec};

create_exception!(pymopfact, MopfactError, PyException);
create_exception!(pymopfact, NoBidiagonalFactorisation, MopfactError);
create_exception!(pymopfact, SingularLeadingMinor, MopfactError);

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::NoBidiagonalFactorisation { .. } => {
            NoBidiagonalFactorisation::new_err(e.to_string())
        }
        Error::SingularLeadingMinor { .. } => SingularLeadingMinor::new_err(e.to_string()),
        other => MopfactError::new_err(other.to_string()),
    }
}

fn fraction_type(py: Python<'_>) -> PyResult<&Bound<'_, PyAny>> {
    static FRACTION: PyOnceLock<Py<PyAny>> = PyOnceLock::new();
    FRACTION
        .get_or_try_init(py, || {
            Ok(py.import("fractions")?.getattr("Fraction")?.unbind())
        })
        .map(|f| f.bind(py))
}

fn to_fraction<'py>(py: Python<'py>, x: &Scalar) -> PyResult<Bound<'py, PyAny>> {
    fraction_type(py)?.call1((x.to_string(),))
}

fn fractions<'py>(py: Python<'py>, xs: &[Scalar]) -> PyResult<Bound<'py, PyList>> {
    let items = xs
        .iter()
        .map(|x| to_fraction(py, x))
        .collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, items)
}

fn from_py(obj: &Bound<'_, PyAny>) -> PyResult<Scalar> {
    let text = obj.str()?.to_string();
    scalar::parse(&text).map_err(to_py_err)
}

fn from_py_list(objs: Vec<Bound<'_, PyAny>>) -> PyResult<Vec<Scalar>> {
    objs.iter().map(from_py).collect()
}

fn method(name: &str) -> PyResult<Method> {
    name.parse().map_err(to_py_err)
}

fn check_r(r: usize) -> PyResult<()> {
    if r == 0 {
        return Err(MopfactError::new_err("r must be positive"));
    }
    Ok(())
}

fn params(a: Vec<Bound<'_, PyAny>>, b: Option<&Bound<'_, PyAny>>) -> PyResult<ClosedFormParams> {
    let a = from_py_list(a)?;
    check_r(a.len())?;
    Ok(match b {
        Some(b) => ClosedFormParams::jacobi_pineiro(a, from_py(b)?),
        None => ClosedFormParams::laguerre(a),
    })
}

fn oracle(alphas: Vec<Bound<'_, PyAny>>, r: usize) -> PyResult<bcf::PathWeightOracle> {
    check_r(r)?;
    Ok(bcf::PathWeightOracle::from_weights(
        from_py_list(alphas)?,
        r,
    ))
}

fn alpha_seq(values: Vec<Bound<'_, PyAny>>) -> PyResult<AlphaSequence> {
    AlphaSequence::new(from_py_list(values)?, Method::GaussBorel).map_err(to_py_err)
}

/// A system of `r` normalised moment functionals.
#[pyclass(name = "System", module = "pymopfact", frozen)]
struct PySystem {
    inner: SystemSpec,
}

#[pymethods]
impl PySystem {
    #[staticmethod]
    fn jacobi_pineiro(a: Vec<Bound<'_, PyAny>>, b: Bound<'_, PyAny>) -> PyResult<Self> {
        let inner =
            SystemSpec::jacobi_pineiro(from_py_list(a)?, from_py(&b)?).map_err(to_py_err)?;
        Ok(PySystem { inner })
    }

    #[staticmethod]
    fn laguerre(a: Vec<Bound<'_, PyAny>>) -> PyResult<Self> {
        let inner = SystemSpec::laguerre(from_py_list(a)?).map_err(to_py_err)?;
        Ok(PySystem { inner })
    }

    /// One moment list per functional; each list is divided by its first entry.
    #[staticmethod]
    fn custom(moments: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<Self> {
        let tables = moments
            .into_iter()
            .map(from_py_list)
            .collect::<PyResult<Vec<_>>>()?;
        let inner = SystemSpec::custom(tables).map_err(to_py_err)?;
        Ok(PySystem { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = SystemSpec::from_moment_json(text).map_err(to_py_err)?;
        Ok(PySystem { inner })
    }

    #[getter]
    fn r(&self) -> usize {
        self.inner.r()
    }

    /// `<v_j, x^n>`, `j` from 1.
    fn moment<'py>(&self, py: Python<'py>, j: usize, n: usize) -> PyResult<Bound<'py, PyAny>> {
        to_fraction(py, &self.inner.moment(j, n).map_err(to_py_err)?)
    }

    fn moments<'py>(
        &self,
        py: Python<'py>,
        j: usize,
        count: usize,
    ) -> PyResult<Bound<'py, PyList>> {
        fractions(py, &self.inner.moments(j, count).map_err(to_py_err)?)
    }

    /// alpha_0..alpha_{count-1}; method is gauss-borel, minors, bcf or closed-form.
    #[pyo3(signature = (count, method = "gauss-borel"))]
    fn alphas<'py>(
        &self,
        py: Python<'py>,
        count: usize,
        method: &str,
    ) -> PyResult<Bound<'py, PyList>> {
        let m = self::method(method)?;
        if count == 0 {
            return Ok(PyList::empty(py));
        }
        let seq = py
            .detach(|| cli::compute_alphas(&self.inner, &[m], count))
            .map_err(to_py_err)?;
        fractions(py, seq[0].values())
    }

    /// Truncated `size x size` Hessenberg matrix `H = L_1 ... L_r U`.
    #[pyo3(signature = (size, method = "gauss-borel"))]
    fn hessenberg<'py>(
        &self,
        py: Python<'py>,
        size: usize,
        method: &str,
    ) -> PyResult<Bound<'py, PyList>> {
        let m = self::method(method)?;
        if size == 0 {
            return Err(MopfactError::new_err("size must be positive"));
        }
        let r = self.inner.r();
        let count = (r + 1) * size.saturating_sub(1) + 1;
        let h = py
            .detach(|| {
                let seq = cli::compute_alphas(&self.inner, &[m], count)?.remove(0);
                hessenberg::assemble(&seq, r, size).map(|f| f.product())
            })
            .map_err(to_py_err)?;
        let rows = h
            .to_rows()
            .iter()
            .map(|row| fractions(py, row))
            .collect::<PyResult<Vec<_>>>()?;
        PyList::new(py, rows)
    }

    fn __repr__(&self) -> String {
        format!("System(r={}, {:?})", self.inner.r(), self.inner.kind())
    }
}

/// Monic type II polynomials P_0..P_m (ascending coefficients) from alphas.
#[pyfunction]
fn polynomials<'py>(
    py: Python<'py>,
    alphas: Vec<Bound<'py, PyAny>>,
    r: usize,
    m: usize,
) -> PyResult<Bound<'py, PyList>> {
    check_r(r)?;
    let seq = alpha_seq(alphas)?;
    let bands = hessenberg::gamma_expand(&seq, r, m).map_err(to_py_err)?;
    let table = hessenberg::polynomials(&bands, m);
    let polys = table
        .polys()
        .iter()
        .map(|p| fractions(py, p.coeffs()))
        .collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, polys)
}

/// gamma_n^[k] as a list of bands, `gammas[k][n]`.
#[pyfunction]
fn gammas<'py>(
    py: Python<'py>,
    alphas: Vec<Bound<'py, PyAny>>,
    r: usize,
    m: usize,
) -> PyResult<Bound<'py, PyList>> {
    check_r(r)?;
    let seq = alpha_seq(alphas)?;
    let bands = hessenberg::gamma_expand(&seq, r, m).map_err(to_py_err)?;
    let out = (0..=r.min(m.saturating_sub(1)))
        .map(|k| fractions(py, bands.band(k)))
        .collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, out)
}

#[pyfunction]
fn sr_polynomial<'py>(
    py: Python<'py>,
    alphas: Vec<Bound<'py, PyAny>>,
    r: usize,
    n: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let oracle = oracle(alphas, r)?;
    to_fraction(py, &bcf::sr_polynomial(&oracle, n).map_err(to_py_err)?)
}

#[pyfunction]
fn generalised_sr<'py>(
    py: Python<'py>,
    alphas: Vec<Bound<'py, PyAny>>,
    r: usize,
    n: usize,
    k: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let oracle = oracle(alphas, r)?;
    to_fraction(py, &bcf::generalised_sr(&oracle, n, k).map_err(to_py_err)?)
}

#[pyfunction]
fn modified_sr<'py>(
    py: Python<'py>,
    alphas: Vec<Bound<'py, PyAny>>,
    r: usize,
    n: usize,
    j: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let oracle = oracle(alphas, r)?;
    to_fraction(py, &bcf::modified_sr(&oracle, n, j).map_err(to_py_err)?)
}

/// True when (H^n)_{0,k} equals S_{n,k} for all n <= n_max, k <= k_max.
#[pyfunction]
fn production_check(
    alphas: Vec<Bound<'_, PyAny>>,
    r: usize,
    n_max: usize,
    k_max: usize,
) -> PyResult<bool> {
    check_r(r)?;
    let seq = alpha_seq(alphas)?;
    Ok(bcf::production_check(&seq, r, n_max, k_max)
        .map_err(to_py_err)?
        .passed())
}

#[pyfunction]
fn jp_alpha_bcf<'py>(
    py: Python<'py>,
    a: Vec<Bound<'py, PyAny>>,
    b: Bound<'py, PyAny>,
    n: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let p = params(a, Some(&b))?;
    to_fraction(py, &closed_forms::jp_alpha_bcf(&p, n).map_err(to_py_err)?)
}

#[pyfunction]
fn jp_alpha_type1<'py>(
    py: Python<'py>,
    a: Vec<Bound<'py, PyAny>>,
    b: Bound<'py, PyAny>,
    n: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let p = params(a, Some(&b))?;
    to_fraction(py, &closed_forms::jp_alpha_type1(&p, n).map_err(to_py_err)?)
}

#[pyfunction]
fn laguerre_alpha<'py>(
    py: Python<'py>,
    a: Vec<Bound<'py, PyAny>>,
    n: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let p = params(a, None)?;
    to_fraction(py, &closed_forms::laguerre_alpha(&p, n).map_err(to_py_err)?)
}

#[pymodule]
fn pymopfact(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add_class::<PySystem>()?;
    m.add("MopfactError", py.get_type::<MopfactError>())?;
    m.add(
        "NoBidiagonalFactorisation",
        py.get_type::<NoBidiagonalFactorisation>(),
    )?;
    m.add(
        "SingularLeadingMinor",
        py.get_type::<SingularLeadingMinor>(),
    )?;
    m.add_function(wrap_pyfunction!(polynomials, m)?)?;
    m.add_function(wrap_pyfunction!(gammas, m)?)?;
    m.add_function(wrap_pyfunction!(sr_polynomial, m)?)?;
    m.add_function(wrap_pyfunction!(generalised_sr, m)?)?;
    m.add_function(wrap_pyfunction!(modified_sr, m)?)?;
    m.add_function(wrap_pyfunction!(production_check, m)?)?;
    m.add_function(wrap_pyfunction!(jp_alpha_bcf, m)?)?;
    m.add_function(wrap_pyfunction!(jp_alpha_type1, m)?)?;
    m.add_function(wrap_pyfunction!(laguerre_alpha, m)?)?;
    Ok(())
}
