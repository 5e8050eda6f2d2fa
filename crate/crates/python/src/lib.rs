//! Python bindings for the pathdec engine.
//!
//! Exposes the graph type and the main operations — pipeline decomposition,
//! certificate verification, the exact oracle, and the instance generators —
//! with vertices in the caller's original labels and certificates as JSON
//! strings.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use pathdec::certificate::Certificate;
use pathdec::decomp::{bound_check, verify_decomposition, BoundKind, Decomposition, PathSeq};
use pathdec::edgelist::{parse_edge_list, write_edge_list};
use pathdec::generate::{generate as gen_instance, GenSpec};
use pathdec::graph::{degree_profile, enumerate_triangles, is_eulerian, Graph as CoreGraph};
use pathdec::pipeline::decompose_eulerian as pipeline_decompose;
use pathdec::solver::{exact_min_decomposition as exact_solve, SolverBudget};

fn value_err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A simple undirected graph with integer vertex labels.
#[pyclass(name = "Graph")]
struct PyGraph {
    inner: CoreGraph,
}

#[pymethods]
impl PyGraph {
    /// Build from a list of (u, v) edges; optional n declares extra
    /// isolated vertices 0..n-1.
    #[new]
    #[pyo3(signature = (edges, n=0))]
    fn new(edges: Vec<(u64, u64)>, n: u64) -> PyResult<Self> {
        let inner =
            CoreGraph::build_with_min_label_range(&edges, n).map_err(value_err)?;
        Ok(PyGraph { inner })
    }

    /// Parse the plain-text edge-list format ("u v" per line, '#' comments,
    /// optional "n <count>" header).
    #[staticmethod]
    fn from_edge_list(text: &str) -> PyResult<Self> {
        Ok(PyGraph {
            inner: parse_edge_list(text).map_err(value_err)?,
        })
    }

    fn to_edge_list(&self) -> String {
        write_edge_list(&self.inner)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    fn degree(&self, label: u64) -> PyResult<usize> {
        let v = self
            .inner
            .vertex_of_label(label)
            .ok_or_else(|| PyValueError::new_err(format!("unknown vertex {label}")))?;
        Ok(self.inner.degree(v))
    }

    fn edges(&self) -> Vec<(u64, u64)> {
        self.inner
            .edges()
            .into_iter()
            .map(|(u, v)| (self.inner.label(u), self.inner.label(v)))
            .collect()
    }

    fn triangles(&self) -> Vec<(u64, u64, u64)> {
        enumerate_triangles(&self.inner)
            .into_iter()
            .map(|t| {
                let [a, b, c] = t.vertices();
                (
                    self.inner.label(a),
                    self.inner.label(b),
                    self.inner.label(c),
                )
            })
            .collect()
    }

    fn is_eulerian(&self) -> bool {
        is_eulerian(&self.inner)
    }

    /// (alpha, beta): odd-degree and non-isolated even-degree vertex counts.
    fn degree_profile(&self) -> (usize, usize) {
        let p = degree_profile(&self.inner);
        (p.alpha, p.beta)
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, m={})", self.inner.n(), self.inner.m())
    }
}

fn paths_to_labels(g: &CoreGraph, d: &Decomposition) -> Vec<Vec<u64>> {
    d.paths
        .iter()
        .map(|p| p.vertices().iter().map(|&v| g.label(v)).collect())
        .collect()
}

fn paths_from_labels(g: &CoreGraph, paths: Vec<Vec<u64>>) -> PyResult<Decomposition> {
    let mut out = Vec::with_capacity(paths.len());
    for p in paths {
        let mut ids = Vec::with_capacity(p.len());
        for label in p {
            let v = g
                .vertex_of_label(label)
                .ok_or_else(|| PyValueError::new_err(format!("unknown vertex {label}")))?;
            ids.push(v);
        }
        if ids.is_empty() {
            return Err(PyValueError::new_err("empty path"));
        }
        out.push(PathSeq::new_unchecked(ids));
    }
    Ok(Decomposition::new(out))
}

/// Run the constructive pipeline on an Eulerian graph with pairwise triangle
/// distance at least 3. Returns the certificate as a JSON string.
#[pyfunction]
#[pyo3(signature = (graph, seed=0, budget_ms=10_000))]
fn decompose_eulerian(graph: &PyGraph, seed: u64, budget_ms: u64) -> PyResult<String> {
    let budget = SolverBudget::new(2_000_000, budget_ms);
    let (d, ledger) = pipeline_decompose(&graph.inner, &budget, seed)
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    let report =
        bound_check(&graph.inner, &d, BoundKind::ThreeFifthsN).map_err(value_err)?;
    Ok(Certificate::new(&graph.inner, &d, &report, Some(&ledger)).to_json())
}

/// Exact minimum path decomposition for graphs with at most 24 edges.
/// Returns (paths, optimal) with vertices as original labels.
#[pyfunction]
#[pyo3(signature = (graph, budget_ms=10_000))]
fn exact_min_decomposition(
    graph: &PyGraph,
    budget_ms: u64,
) -> PyResult<(Vec<Vec<u64>>, bool)> {
    let budget = SolverBudget::new(2_000_000, budget_ms);
    let (d, optimal) = exact_solve(&graph.inner, &budget).map_err(value_err)?;
    Ok((paths_to_labels(&graph.inner, &d), optimal))
}

/// Check a claimed decomposition; returns the list of violations, empty when
/// the paths are edge-disjoint simple paths covering every edge.
#[pyfunction]
fn verify(graph: &PyGraph, paths: Vec<Vec<u64>>) -> PyResult<Vec<String>> {
    let d = paths_from_labels(&graph.inner, paths)?;
    Ok(verify_decomposition(&graph.inner, &d)
        .violations
        .into_iter()
        .map(|v| v.to_string())
        .collect())
}

/// Allowed path count for a bound kind: "3n5" or "cfz".
#[pyfunction]
fn allowed_paths(graph: &PyGraph, kind: &str) -> PyResult<usize> {
    let kind = match kind {
        "3n5" => BoundKind::ThreeFifthsN,
        "cfz" => BoundKind::CfzAlphaBeta,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown bound kind '{other}', expected '3n5' or 'cfz'"
            )))
        }
    };
    Ok(kind.allowed(&graph.inner))
}

/// Generate a named instance family. Supported: disjoint_triangles (k),
/// flower (lengths), spaced_triangle_eulerian (n, t),
/// triangle_free_eulerian (n).
#[pyfunction]
#[pyo3(signature = (family, seed=0, k=None, n=None, t=None, lengths=None))]
fn generate(
    family: &str,
    seed: u64,
    k: Option<usize>,
    n: Option<usize>,
    t: Option<usize>,
    lengths: Option<Vec<usize>>,
) -> PyResult<PyGraph> {
    let need = |opt: Option<usize>, name: &str| {
        opt.ok_or_else(|| PyValueError::new_err(format!("{family} needs {name}=")))
    };
    let spec = match family {
        "disjoint_triangles" => GenSpec::DisjointTriangles {
            k: need(k, "k")?,
        },
        "flower" => GenSpec::Flower {
            cycle_lengths: lengths
                .ok_or_else(|| PyValueError::new_err("flower needs lengths=[...]"))?,
        },
        "spaced_triangle_eulerian" => GenSpec::SpacedTriangleEulerian {
            n: need(n, "n")?,
            t: need(t, "t")?,
        },
        "triangle_free_eulerian" => GenSpec::TriangleFreeEulerian { n: need(n, "n")? },
        other => {
            return Err(PyValueError::new_err(format!("unknown family '{other}'")))
        }
    };
    Ok(PyGraph {
        inner: gen_instance(&spec, seed).map_err(value_err)?,
    })
}

#[pymodule]
fn pathdec_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(decompose_eulerian, m)?)?;
    m.add_function(wrap_pyfunction!(exact_min_decomposition, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(allowed_paths, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    Ok(())
}
