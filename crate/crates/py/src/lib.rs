//! Python bindings. Rationals cross the boundary as `fractions.Fraction`;
//! inputs may also be `int` or `"num/den"` strings.

use apls_core::driver::{cmd_extract, cmd_prove, cmd_report, ProveConfig, WitnessSource};
use apls_core::generators::{generate, FamilySpec};
use apls_core::hyperfinite::{area_coarea_check, EditBound};
use apls_core::labeling::ProofLabeling;
use apls_core::measures::{check_uniformity, uniform_ball_witness};
use apls_core::rational::parse_rational;
use apls_core::separators::SeparatorDistribution;
use apls_core::verifier::{self, pipeline_verify, verify_property_a, Predicate};
use apls_core::{BoundedDegreeGraph, Error, Rational};
use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyString};

create_exception!(apls, AplsError, PyException);
create_exception!(apls, WitnessTooRough, AplsError);
create_exception!(apls, NotAccepted, AplsError);

fn py_err(e: Error) -> PyErr {
    match e {
        Error::WitnessTooRough { .. } => WitnessTooRough::new_err(e.to_string()),
        Error::NotAccepted => NotAccepted::new_err(e.to_string()),
        _ => AplsError::new_err(e.to_string()),
    }
}

fn fraction<'py>(py: Python<'py>, q: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((*q.numer(), *q.denom()))
}

fn rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    if let Ok(s) = obj.cast::<PyString>() {
        return parse_rational(&s.to_cow()?).map_err(py_err);
    }
    let num: i128 = obj.getattr("numerator")?.extract()?;
    let den: i128 = obj.getattr("denominator")?.extract()?;
    if den == 0 {
        return Err(AplsError::new_err("zero denominator"));
    }
    Ok(Rational::new(num, den))
}

fn predicate(name: &str) -> PyResult<Predicate> {
    name.parse::<Predicate>().map_err(py_err)
}

/// A simple undirected graph with a declared degree bound.
#[pyclass(name = "Graph", module = "apls", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyGraph {
    inner: BoundedDegreeGraph,
}

#[pymethods]
impl PyGraph {
    #[new]
    fn new(n: usize, edges: Vec<(usize, usize)>, d: usize) -> PyResult<Self> {
        Ok(Self { inner: BoundedDegreeGraph::from_edges(n, &edges, d).map_err(py_err)? })
    }

    /// `family` is one of grid, path, cycle, tree, random-regular.
    #[staticmethod]
    #[pyo3(signature = (family, dims, seed = 0))]
    fn generate(family: &str, dims: Vec<usize>, seed: u64) -> PyResult<Self> {
        let spec = FamilySpec::parse(family, &dims, seed).map_err(py_err)?;
        Ok(Self { inner: generate(&spec).map_err(py_err)? })
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(Self { inner: BoundedDegreeGraph::from_text(text).map_err(py_err)? })
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn degree_bound(&self) -> usize {
        self.inner.degree_bound()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().collect()
    }

    fn neighbors(&self, v: usize) -> PyResult<Vec<usize>> {
        self.inner.check_vertex(v).map_err(py_err)?;
        Ok(self.inner.neighbors(v).to_vec())
    }

    fn disjoint_union(&self, other: &PyGraph) -> Self {
        Self { inner: self.inner.disjoint_union(&other.inner) }
    }

    fn is_planar(&self) -> bool {
        verifier::is_planar(&self.inner)
    }

    /// Maximum edge l1 distance of the uniform-ball witness at radius `r`.
    fn uniform_ball_eps<'py>(&self, py: Python<'py>, r: usize) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &check_uniformity(&self.inner, &uniform_ball_witness(&self.inner, r)).max_edge_l1)
    }

    fn __len__(&self) -> usize {
        self.inner.n()
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, m={}, d={})", self.inner.n(), self.inner.edge_count(), self.inner.degree_bound())
    }
}

/// A proof labeling: header parameters plus `(color, table)` per vertex.
#[pyclass(name = "Labeling", module = "apls", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyLabeling {
    inner: ProofLabeling,
}

#[pymethods]
impl PyLabeling {
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        Ok(Self { inner: ProofLabeling::from_text(text).map_err(py_err)? })
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    #[getter]
    fn r(&self) -> usize {
        self.inner.params.r
    }

    #[getter]
    fn alpha(&self) -> u64 {
        self.inner.params.alpha
    }

    #[getter]
    fn palette(&self) -> usize {
        self.inner.params.palette
    }

    #[getter]
    fn eps_prime<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.inner.params.eps_prime)
    }

    #[getter(K)]
    fn locality(&self) -> Option<usize> {
        self.inner.params.locality
    }

    /// `(color, table)` of vertex `v`.
    fn label(&self, v: usize) -> PyResult<(usize, Vec<u64>)> {
        let l = self.inner.labels.get(v).ok_or_else(|| AplsError::new_err(format!("no vertex {v}")))?;
        Ok((l.color, l.table.clone()))
    }

    /// Copy with the label of `v` replaced.
    fn with_label(&self, v: usize, color: usize, table: Vec<u64>) -> PyResult<Self> {
        let mut inner = self.inner.clone();
        let l = inner.labels.get_mut(v).ok_or_else(|| AplsError::new_err(format!("no vertex {v}")))?;
        l.color = color;
        l.table = table;
        Ok(Self { inner })
    }

    fn __len__(&self) -> usize {
        self.inner.labels.len()
    }

    fn __repr__(&self) -> String {
        let p = &self.inner.params;
        format!("Labeling(n={}, r={}, alpha={}, palette={}, eps_prime={})", self.inner.labels.len(), p.r, p.alpha, p.palette, p.eps_prime)
    }
}

/// Runs the honest prover. Returns `(labeling, measured_eps, witness_kind)`.
/// `witness` is `uniform-ball`, `auto` or `separators:<text>`.
#[pyfunction]
#[pyo3(signature = (graph, r = 1, eps_prime = None, eps = None, alpha = None, k_shift = None, K = None, witness = "uniform-ball"))]
#[allow(non_snake_case, clippy::too_many_arguments)]
fn prove<'py>(
    py: Python<'py>,
    graph: &PyGraph,
    r: usize,
    eps_prime: Option<&Bound<'py, PyAny>>,
    eps: Option<&Bound<'py, PyAny>>,
    alpha: Option<u64>,
    k_shift: Option<usize>,
    K: Option<usize>,
    witness: &str,
) -> PyResult<(PyLabeling, Bound<'py, PyAny>, &'static str)> {
    let witness = match witness {
        "uniform-ball" => WitnessSource::UniformBall,
        "auto" => WitnessSource::Auto,
        other => match other.strip_prefix("separators:") {
            Some(text) => WitnessSource::Separators(SeparatorDistribution::from_text(&graph.inner, text).map_err(py_err)?),
            None => return Err(AplsError::new_err(format!("unknown witness source {other:?}"))),
        },
    };
    let config = ProveConfig {
        r,
        eps: eps.map(rational).transpose()?,
        eps_prime: eps_prime.map(rational).transpose()?,
        alpha,
        k_shift,
        locality: K,
        witness,
    };
    let out = py.detach(|| cmd_prove(&graph.inner, &config)).map_err(py_err)?;
    Ok((PyLabeling { inner: out.labeling }, fraction(py, &out.measured_eps)?, out.witness_kind))
}

/// Pipeline verifier. Returns `(accepted, [(vertex, check), ...])`.
#[pyfunction]
#[pyo3(signature = (graph, labeling, eps = None, predicate = "planar"))]
fn verify(
    py: Python<'_>,
    graph: &PyGraph,
    labeling: &PyLabeling,
    eps: Option<&Bound<'_, PyAny>>,
    predicate: &str,
) -> PyResult<(bool, Vec<(usize, &'static str)>)> {
    let eps = eps.map(rational).transpose()?;
    let predicate = self::predicate(predicate)?;
    let verdict = py
        .detach(|| pipeline_verify(&graph.inner, &labeling.inner, eps.as_ref(), predicate))
        .map_err(py_err)?;
    Ok((verdict.accepted(), verdict.rejecting().map(|(v, c)| (v, c.name())).collect()))
}

/// Property-A verifier alone (no locally-P factor).
#[pyfunction]
fn verify_property_a_only(graph: &PyGraph, labeling: &PyLabeling) -> PyResult<(bool, Vec<(usize, &'static str)>)> {
    let verdict = verify_property_a(&graph.inner, &labeling.inner).map_err(py_err)?;
    Ok((verdict.accepted(), verdict.rejecting().map(|(v, c)| (v, c.name())).collect()))
}

/// Decodes an accepted labeling and extracts a partition. Returns a dict
/// with `blocks`, `removed`, `decoded_eps` and `edit_bound` (`None` when a
/// block fails the predicate).
#[pyfunction]
#[pyo3(signature = (graph, labeling, predicate = "planar"))]
fn extract<'py>(py: Python<'py>, graph: &PyGraph, labeling: &PyLabeling, predicate: &str) -> PyResult<Bound<'py, PyDict>> {
    let predicate = self::predicate(predicate)?;
    let ex = py.detach(|| cmd_extract(&graph.inner, &labeling.inner, predicate)).map_err(py_err)?;
    let out = PyDict::new(py);
    out.set_item("blocks", ex.partition.blocks.clone())?;
    out.set_item("removed", ex.partition.removed.clone())?;
    out.set_item("decoded_eps", fraction(py, &ex.decoded_eps)?)?;
    match &ex.edit_bound {
        EditBound::Bound(q) => out.set_item("edit_bound", fraction(py, q)?)?,
        EditBound::Infeasible { .. } => out.set_item("edit_bound", py.None())?,
    }
    out.set_item("partition_text", ex.partition.to_text())?;
    Ok(out)
}

/// The `key = value` report as a dict of strings.
#[pyfunction]
#[pyo3(signature = (graph, labeling = None, predicate = "planar"))]
fn report<'py>(py: Python<'py>, graph: &PyGraph, labeling: Option<&PyLabeling>, predicate: &str) -> PyResult<Bound<'py, PyDict>> {
    let predicate = self::predicate(predicate)?;
    let text = py
        .detach(|| cmd_report(&graph.inner, labeling.map(|l| &l.inner), predicate))
        .map_err(py_err)?;
    let out = PyDict::new(py);
    for line in text.lines() {
        if let Some((k, v)) = line.split_once(" = ") {
            out.set_item(k, v)?;
        }
    }
    Ok(out)
}

/// Both sides of the area and coarea identities for `zeta : V -> [0, 1]`:
/// `(coarea_lhs, coarea_rhs, area_lhs, area_rhs)`.
#[pyfunction]
fn area_coarea<'py>(py: Python<'py>, graph: &PyGraph, zeta: Vec<Bound<'py, PyAny>>) -> PyResult<Vec<Bound<'py, PyAny>>> {
    if zeta.len() != graph.inner.n() {
        return Err(AplsError::new_err("one value per vertex"));
    }
    let zeta = zeta.iter().map(rational).collect::<PyResult<Vec<_>>>()?;
    let ac = area_coarea_check(&graph.inner, &zeta).map_err(py_err)?;
    [ac.coarea_lhs, ac.coarea_rhs, ac.area_lhs, ac.area_rhs].iter().map(|q| fraction(py, q)).collect()
}

#[pymodule]
fn apls(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyLabeling>()?;
    m.add_function(wrap_pyfunction!(prove, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(verify_property_a_only, m)?)?;
    m.add_function(wrap_pyfunction!(extract, m)?)?;
    m.add_function(wrap_pyfunction!(report, m)?)?;
    m.add_function(wrap_pyfunction!(area_coarea, m)?)?;
    m.add("AplsError", m.py().get_type::<AplsError>())?;
    m.add("WitnessTooRough", m.py().get_type::<WitnessTooRough>())?;
    m.add("NotAccepted", m.py().get_type::<NotAccepted>())?;
    Ok(())
}
