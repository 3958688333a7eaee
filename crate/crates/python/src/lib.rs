//! Python bindings: diagrams, characters, hom dimensions, series checks and
//! the JSON run-configuration entry point.

use std::sync::Arc;

use diagcat::arith::{fmt_q, parse_q, Q};
use diagcat::character::{Alpha, Character};
use diagcat::cli::{run, RunConfig};
use diagcat::goodness::check_loyal;
use diagcat::gram::{hom_dim, Gram};
use diagcat::presets::PresetBundle;
use diagcat::realize::ModelFile;
use diagcat::Diagram;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyAny;

fn err(e: diagcat::Error) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn rationals(xs: &[String]) -> PyResult<Vec<Q>> {
    xs.iter()
        .map(|s| parse_q(s).ok_or_else(|| PyValueError::new_err(format!("not a rational: {s:?}"))))
        .collect()
}

fn to_json<'py>(py: Python<'py>, v: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import_bound("json")?.call_method1("loads", (text,))
}

/// A diagram over a character's signature.
#[pyclass(name = "Diagram", frozen)]
#[derive(Clone)]
struct PyDiagram(Diagram);

#[pymethods]
impl PyDiagram {
    #[getter]
    fn outputs(&self) -> usize {
        self.0.outputs()
    }

    #[getter]
    fn inputs(&self) -> usize {
        self.0.inputs()
    }

    fn literal(&self) -> String {
        self.0.to_literal()
    }

    fn compose(&self, f: &PyDiagram) -> PyResult<PyDiagram> {
        self.0.compose(&f.0).map(PyDiagram).map_err(err)
    }

    fn tensor(&self, g: &PyDiagram) -> PyResult<PyDiagram> {
        self.0.tensor(&g.0).map(PyDiagram).map_err(err)
    }

    fn trace_close(&self) -> PyResult<PyDiagram> {
        self.0.trace_close().map(PyDiagram).map_err(err)
    }

    fn component_count(&self) -> PyResult<usize> {
        self.0.component_count().map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("Diagram({:?})", self.0.to_literal())
    }
}

/// A character: values of closed diagrams as polynomials in the parameters.
#[pyclass(name = "Character", frozen)]
#[derive(Clone)]
struct PyCharacter(Arc<Character>);

#[pymethods]
impl PyCharacter {
    #[staticmethod]
    fn preset(name: &str) -> PyResult<Self> {
        let b = PresetBundle::by_name(name).map_err(err)?;
        b.character().map(PyCharacter).map_err(err)
    }

    #[staticmethod]
    fn frobenius(alpha: Vec<String>) -> PyResult<Self> {
        Ok(PyCharacter(Character::frobenius(Alpha::list(rationals(&alpha)?))))
    }

    #[staticmethod]
    fn from_model_file(path: &str) -> PyResult<Self> {
        let m = ModelFile::load(std::path::Path::new(path)).and_then(|f| f.to_model(None)).map_err(err)?;
        Ok(PyCharacter(Character::from_model(&m)))
    }

    #[getter]
    fn params(&self) -> Vec<String> {
        self.0.params().to_vec()
    }

    fn parse(&self, literal: &str) -> PyResult<PyDiagram> {
        Diagram::parse(self.0.signature(), literal).map(PyDiagram).map_err(err)
    }

    fn generator(&self, name: &str) -> PyResult<PyDiagram> {
        Diagram::generator(self.0.signature(), name).map(PyDiagram).map_err(err)
    }

    fn loop_diagram(&self) -> PyDiagram {
        PyDiagram(Diagram::loop_diagram(self.0.signature()))
    }

    /// Value of a closed diagram, printed as a polynomial.
    fn evaluate(&self, d: &PyDiagram) -> PyResult<String> {
        self.0.evaluate(&d.0).map(|v| v.fmt_with(self.0.params())).map_err(err)
    }

    fn specialize(&self, values: Vec<String>) -> PyResult<Self> {
        self.0.specialize(&rationals(&values)?).map(PyCharacter).map_err(err)
    }

    fn add(&self, o: &PyCharacter) -> PyResult<Self> {
        self.0.add(&o.0).map(PyCharacter).map_err(err)
    }

    fn mul(&self, o: &PyCharacter) -> PyResult<Self> {
        self.0.mul(&o.0).map(PyCharacter).map_err(err)
    }

    /// Gram matrix of two lists of diagrams, entries as strings.
    fn gram(&self, rows: Vec<PyDiagram>, cols: Vec<PyDiagram>) -> PyResult<Vec<Vec<String>>> {
        let r: Vec<Diagram> = rows.into_iter().map(|d| d.0).collect();
        let c: Vec<Diagram> = cols.into_iter().map(|d| d.0).collect();
        let g = Gram::compute(&r, &c, &self.0).map_err(err)?;
        let names = self.0.params();
        Ok(g.entries.iter().map(|row| row.iter().map(|e| e.fmt_with(names)).collect()).collect())
    }

    fn __repr__(&self) -> String {
        format!("Character({})", self.0.provenance())
    }
}

/// Hom-space dimension of a preset at `(p, q)`, generic or at a point.
#[pyfunction]
#[pyo3(signature = (preset, p, q, at = None))]
fn hom_dimension(preset: &str, p: usize, q: usize, at: Option<Vec<String>>) -> PyResult<usize> {
    let b = PresetBundle::by_name(preset).map_err(err)?;
    let chi = b.character().map_err(err)?;
    let point = at.map(|v| rationals(&v)).transpose()?;
    let cutoffs = if b.cutoff == 0 { vec![0] } else { vec![b.cutoff - 1, b.cutoff] };
    hom_dim(b.enumerator, &chi, p, q, &cutoffs, point.as_deref())
        .map(|(d, _)| d)
        .map_err(err)
}

/// Rational fit of a Frobenius sequence with the good/loyal flags.
#[pyfunction]
fn loyal<'py>(py: Python<'py>, alpha: Vec<String>) -> PyResult<Bound<'py, PyAny>> {
    let report = check_loyal(&rationals(&alpha)?).map_err(err)?;
    to_json(py, &report)
}

/// Runs a JSON run configuration; returns `(exit_code, report_text)`.
#[pyfunction]
fn run_config(config: &str) -> PyResult<(i32, String)> {
    let cfg: RunConfig = serde_json::from_str(config).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let out = run(&cfg).map_err(err)?;
    Ok((out.outcome.exit_code(), out.text))
}

/// Canonical string form of a rational.
#[pyfunction]
fn normalize_rational(s: &str) -> PyResult<String> {
    rationals(&[s.to_string()]).map(|v| fmt_q(&v[0]))
}

#[pymodule]
fn diagcat_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDiagram>()?;
    m.add_class::<PyCharacter>()?;
    m.add_function(wrap_pyfunction!(hom_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(loyal, m)?)?;
    m.add_function(wrap_pyfunction!(run_config, m)?)?;
    m.add_function(wrap_pyfunction!(normalize_rational, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
