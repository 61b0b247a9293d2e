use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use uryson_core::band::{project, EvalMode};
use uryson_core::calculus::{pointwise, Formula};
use uryson_core::element::LatticeElement;
use uryson_core::error::Error;
use uryson_core::lateral::continuous_part_at;
use uryson_core::operator::{describe, Domain, Operator as _, UrysonOperator};
use uryson_core::pwl::PiecewiseLinearFn;
use uryson_core::rational::{self, Rational};
use uryson_core::scenario::Scenario;
use uryson_core::suite::run_suite;

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Accepts ints, strings such as `"-3/4"`, and anything else whose `str()` parses.
fn to_rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    rational::parse(&obj.str()?.to_string()).map_err(py_err)
}

fn to_rationals(objs: &[Bound<'_, PyAny>]) -> PyResult<Vec<Rational>> {
    objs.iter().map(to_rational).collect()
}

/// A vector of `R^n` or an eventually constant sequence. Coordinates are exact rationals rendered as `p/q`.
#[pyclass(name = "Element", frozen, eq, from_py_object)]
#[derive(Clone, PartialEq)]
struct PyElement(LatticeElement);

#[pymethods]
impl PyElement {
    #[new]
    fn new(coords: Vec<Bound<'_, PyAny>>) -> PyResult<Self> {
        Ok(PyElement(LatticeElement::finite(to_rationals(&coords)?)))
    }

    #[staticmethod]
    fn sequence(prefix: Vec<Bound<'_, PyAny>>, tail: &Bound<'_, PyAny>) -> PyResult<Self> {
        Ok(PyElement(LatticeElement::ec_seq(to_rationals(&prefix)?, to_rational(tail)?)))
    }

    fn coords(&self) -> Vec<String> {
        self.0.coords().iter().map(rational::format).collect()
    }

    fn tail(&self) -> Option<String> {
        self.0.tail().map(rational::format)
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn __repr__(&self) -> String {
        format!("Element({})", self.0)
    }
}

#[pyclass(name = "PiecewiseLinear", frozen, from_py_object)]
#[derive(Clone)]
struct PyPwl(PiecewiseLinearFn);

#[pymethods]
impl PyPwl {
    #[new]
    fn new(
        breakpoints: Vec<(Bound<'_, PyAny>, Bound<'_, PyAny>)>,
        left_slope: &Bound<'_, PyAny>,
        right_slope: &Bound<'_, PyAny>,
    ) -> PyResult<Self> {
        let bps = breakpoints
            .iter()
            .map(|(x, y)| Ok((to_rational(x)?, to_rational(y)?)))
            .collect::<PyResult<Vec<_>>>()?;
        PiecewiseLinearFn::new(bps, to_rational(left_slope)?, to_rational(right_slope)?).map(PyPwl).map_err(py_err)
    }

    #[staticmethod]
    fn abs() -> Self {
        PyPwl(PiecewiseLinearFn::abs())
    }

    #[staticmethod]
    fn linear(slope: &Bound<'_, PyAny>) -> PyResult<Self> {
        Ok(PyPwl(PiecewiseLinearFn::linear(to_rational(slope)?)))
    }

    fn __call__(&self, t: &Bound<'_, PyAny>) -> PyResult<String> {
        Ok(rational::format(&self.0.eval(&to_rational(t)?)))
    }
}

/// A Uryson operator given by a kernel of piecewise-linear entries and an optional tail column.
#[pyclass(name = "Operator", frozen, from_py_object)]
#[derive(Clone)]
struct PyOperator(UrysonOperator);

#[pymethods]
impl PyOperator {
    #[new]
    #[pyo3(signature = (domain, kernel, tail = None))]
    fn new(domain: &str, kernel: Vec<Vec<PyPwl>>, tail: Option<Vec<PyPwl>>) -> PyResult<Self> {
        let domain: Domain = domain.parse().map_err(py_err)?;
        let codomain = kernel.len();
        let kernel = kernel.into_iter().map(|row| row.into_iter().map(|f| f.0).collect()).collect();
        let tail = tail.map(|col| col.into_iter().map(|f| f.0).collect());
        UrysonOperator::new(domain, codomain, kernel, tail).map(PyOperator).map_err(py_err)
    }

    fn __call__(&self, x: &PyElement) -> PyResult<PyElement> {
        self.0.apply(&x.0).map(PyElement).map_err(py_err)
    }

    fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    fn __repr__(&self) -> String {
        format!("Operator({} on {})", describe(&self.0), self.0.domain())
    }
}

/// A named collection of operators, elements and admissible sets.
#[pyclass(name = "Scenario", frozen)]
struct PyScenario(Scenario);

#[pymethods]
impl PyScenario {
    #[staticmethod]
    fn builtin() -> Self {
        PyScenario(Scenario::builtin())
    }

    #[staticmethod]
    fn from_toml(text: &str) -> PyResult<Self> {
        Scenario::from_toml(text).map(PyScenario).map_err(py_err)
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        Scenario::load(path).map(PyScenario).map_err(py_err)
    }

    fn operator(&self, name: &str) -> PyResult<PyOperator> {
        self.0.operator(name).cloned().map(PyOperator).map_err(py_err)
    }

    fn element(&self, name: &str) -> PyResult<PyElement> {
        self.0.element(name).cloned().map(PyElement).map_err(py_err)
    }

    /// Runs a verification suite and returns the machine-format report.
    fn verify(&self, suite: &str, seed: u64) -> PyResult<String> {
        run_suite(&self.0, suite, seed).map(|r| r.to_machine()).map_err(py_err)
    }
}

/// `calc("join", T, x, S)`, `calc("pos", T, x)`, ...
#[pyfunction]
#[pyo3(signature = (formula, t, x, s = None, resolution = 8))]
fn calc(formula: &str, t: &PyOperator, x: &PyElement, s: Option<&PyOperator>, resolution: usize) -> PyResult<PyElement> {
    let f: Formula = formula.parse().map_err(py_err)?;
    pointwise(f, &t.0, s.map(|s| &s.0), &x.0, resolution).map(|v| PyElement(v.output)).map_err(py_err)
}

/// Returns `(π_S Te, σ_S Te)`, exact unless `eps` is given.
#[pyfunction]
#[pyo3(signature = (t, s, e, eps = None, resolution = 8))]
fn band_project(
    t: &PyOperator,
    s: &PyOperator,
    e: &PyElement,
    eps: Option<&Bound<'_, PyAny>>,
    resolution: usize,
) -> PyResult<(PyElement, PyElement)> {
    let mode = match eps {
        Some(eps) => EvalMode::Epsilon(to_rational(eps)?),
        None => EvalMode::ExactLimit,
    };
    let p = project(&t.0, &s.0, &e.0, &mode, resolution).map_err(py_err)?;
    Ok((PyElement(p.pi_part), PyElement(p.sigma_part)))
}

/// Returns the laterally continuous and singular parts of `Te`.
#[pyfunction]
#[pyo3(signature = (t, e, resolution = 8))]
fn decompose(t: &PyOperator, e: &PyElement, resolution: usize) -> PyResult<(PyElement, PyElement)> {
    let parts = continuous_part_at(&t.0, &e.0, resolution).map_err(py_err)?;
    Ok((PyElement(parts.continuous_part), PyElement(parts.singular_part)))
}

#[pymodule]
fn uryson(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyElement>()?;
    m.add_class::<PyPwl>()?;
    m.add_class::<PyOperator>()?;
    m.add_class::<PyScenario>()?;
    m.add_function(wrap_pyfunction!(calc, m)?)?;
    m.add_function(wrap_pyfunction!(band_project, m)?)?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    Ok(())
}
