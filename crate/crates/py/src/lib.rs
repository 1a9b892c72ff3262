//! Python bindings: point sets, threefold specs and certificates, with
//! reports handed over as plain dicts.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;
use qfact::certify::{self, Route, RunOptions, SpecJson, DEFAULT_SEED};
use qfact::conditions;
use qfact::models;
use qfact::planar::{self, StarParams};
use qfact::pointgeom::PointSetJson;

create_exception!(qfactpy, QfactError, PyException, "Raised with the error kind as first argument.");

fn err(e: qfact::Error) -> PyErr {
    QfactError::new_err((e.kind(), e.to_string()))
}

fn parse_err(e: serde_json::Error) -> PyErr {
    QfactError::new_err(("Parse", e.to_string()))
}

/// Serializes through JSON into a Python object.
fn to_py<'py, T: serde::Serialize>(py: Python<'py>, x: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(x).map_err(parse_err)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn route_from(s: &str) -> PyResult<Route> {
    serde_json::from_value(serde_json::Value::String(s.into())).map_err(|_| QfactError::new_err(("InvalidInput", format!("unknown route {s:?}"))))
}

#[pyclass(name = "PointSet", module = "qfactpy", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPointSet(qfact::pointgeom::PointSet);

#[pymethods]
impl PyPointSet {
    /// Parses `{"field": ..., "ambient": N, "nodes": [[...], ...]}`.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let j: PointSetJson = serde_json::from_str(text).map_err(parse_err)?;
        Ok(PyPointSet(qfact::pointgeom::PointSet::from_json(&j).map_err(err)?))
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0.to_json()).map_err(parse_err)
    }

    #[getter]
    fn ambient(&self) -> usize {
        self.0.ambient()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    /// Rank and defect of the evaluation matrix in degree `degree`.
    fn defect<'py>(&self, py: Python<'py>, degree: u32) -> PyResult<Bound<'py, PyAny>> {
        let rep = conditions::defect(&self.0, degree).map_err(err)?;
        to_py(py, &rep)
    }

    fn imposes_independent(&self, degree: u32) -> PyResult<bool> {
        conditions::imposes_independent(&self.0, degree).map_err(err)
    }

    /// Property ★ with multiplier `m` up to curve degree `t_max` (plane sets).
    #[pyo3(signature = (m, t_max = 2, budget = planar::DEFAULT_SUBSET_BUDGET))]
    fn star_property<'py>(&self, py: Python<'py>, m: usize, t_max: u32, budget: u64) -> PyResult<Bound<'py, PyAny>> {
        let rep = planar::star_property(&self.0, StarParams::new(m, t_max).map_err(err)?, budget).map_err(err)?;
        to_py(py, &rep)
    }

    #[pyo3(signature = (d, budget = planar::DEFAULT_SUBSET_BUDGET))]
    fn bese_hypothesis<'py>(&self, py: Python<'py>, d: u32, budget: u64) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &planar::bese_hypothesis(&self.0, d, budget).map_err(err)?)
    }

    /// A plane curve of degree `d` through every point but the `i`-th, as form JSON.
    #[pyo3(signature = (i, d, budget = planar::DEFAULT_SUBSET_BUDGET))]
    fn separating_curve(&self, i: usize, d: u32, budget: u64) -> PyResult<String> {
        let c = planar::separating_curve(&self.0, i, d, budget).map_err(err)?;
        serde_json::to_string(&c.to_json()).map_err(parse_err)
    }
}

#[pyclass(name = "ThreefoldSpec", module = "qfactpy", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySpec(certify::ThreefoldSpec);

#[pymethods]
impl PySpec {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let j: SpecJson = serde_json::from_str(text).map_err(parse_err)?;
        Ok(PySpec(certify::ThreefoldSpec::from_json(&j).map_err(err)?))
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0.to_json()).map_err(parse_err)
    }

    #[getter]
    fn variant(&self) -> PyResult<String> {
        Ok(serde_json::to_value(self.0.variant).map_err(parse_err)?.as_str().unwrap_or_default().to_owned())
    }

    #[getter]
    fn target_degree(&self) -> u32 {
        self.0.target_degree()
    }

    /// Runs the certifier; `route` is auto, bound, rank, constructive or base_locus.
    #[pyo3(signature = (seed = DEFAULT_SEED, route = "auto", newton_starts = None))]
    fn certify(&self, py: Python<'_>, seed: u64, route: &str, newton_starts: Option<usize>) -> PyResult<PyCertificate> {
        let opts = RunOptions { seed, route: route_from(route)?, newton_starts, ..RunOptions::default() };
        let spec = self.0.clone();
        let cert = py.detach(move || certify::certify(&spec, &opts)).map_err(err)?;
        Ok(PyCertificate(cert))
    }
}

#[pyclass(name = "Certificate", module = "qfactpy", frozen)]
struct PyCertificate(certify::Certificate);

#[pymethods]
impl PyCertificate {
    #[getter]
    fn verdict(&self) -> PyResult<String> {
        Ok(serde_json::to_value(self.0.verdict).map_err(parse_err)?.as_str().unwrap_or_default().to_owned())
    }

    #[getter]
    fn exit_code(&self) -> i32 {
        self.0.verdict.exit_code()
    }

    #[getter]
    fn nodes(&self) -> usize {
        self.0.nodes
    }

    #[getter]
    fn defect(&self) -> Option<usize> {
        self.0.defect.as_ref().map(|d| d.defect)
    }

    #[getter]
    fn rank(&self) -> Option<usize> {
        self.0.defect.as_ref().map(|d| d.rank)
    }

    fn node_set(&self) -> PyResult<PyPointSet> {
        Ok(PyPointSet(qfact::pointgeom::PointSet::from_json(&self.0.node_set).map_err(err)?))
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0).map_err(parse_err)
    }

    /// Replays the recorded evidence; returns the checks performed.
    fn reverify(&self) -> PyResult<Vec<String>> {
        certify::reverify(&self.0).map_err(err)
    }
}

#[pyfunction]
fn example_names() -> Vec<&'static str> {
    models::NAMES.to_vec()
}

/// A named example's spec and its expected values.
#[pyfunction]
#[pyo3(signature = (name, seed = DEFAULT_SEED))]
fn example<'py>(py: Python<'py>, name: &str, seed: u64) -> PyResult<(PySpec, Bound<'py, PyAny>)> {
    let ex = models::by_name(name, seed).map_err(err)?;
    let expected = PyDict::new(py);
    for e in &ex.expected {
        expected.set_item(&e.quantity, e.value)?;
    }
    Ok((PySpec(ex.spec), expected.into_any()))
}

#[pyfunction]
fn bese_size_bound(d: u32) -> u64 {
    planar::bese_size_bound(d)
}

#[pyfunction]
fn davis_geramita_size_bound(d: u32) -> u64 {
    planar::davis_geramita_size_bound(d)
}

#[pyfunction]
fn monomial_count(n_ambient: usize, d: u32) -> usize {
    qfact::polyform::monomial_count(n_ambient, d)
}

#[pymodule]
fn qfactpy(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("QfactError", m.py().get_type::<QfactError>())?;
    m.add_class::<PyPointSet>()?;
    m.add_class::<PySpec>()?;
    m.add_class::<PyCertificate>()?;
    m.add_function(wrap_pyfunction!(example_names, m)?)?;
    m.add_function(wrap_pyfunction!(example, m)?)?;
    m.add_function(wrap_pyfunction!(bese_size_bound, m)?)?;
    m.add_function(wrap_pyfunction!(davis_geramita_size_bound, m)?)?;
    m.add_function(wrap_pyfunction!(monomial_count, m)?)?;
    Ok(())
}
