//! Python bindings: graphs, mining, cost scoring and the model codec.

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use cutnpeel::codec::{decode, encode, model_to_string, read_model};
use cutnpeel::cost::{relative_cost, total_cost as core_total_cost, Universe};
use cutnpeel::synth::{gen_er as core_gen_er, plant as core_plant, PlantSpec};
use cutnpeel::{Algorithm, DriverConfig, Error, ObjectSubset};

fn to_py(err: Error) -> PyErr {
    match err {
        Error::Io(e) => PyIOError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

type Lists = (Vec<u32>, Vec<u32>, Vec<u32>);

#[pyclass(name = "TemporalGraph", module = "cutnpeel", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyTemporalGraph {
    inner: cutnpeel::TemporalGraph,
}

#[pymethods]
impl PyTemporalGraph {
    /// Builds a graph from `(s, d, t)` index triples over `counts` objects.
    #[new]
    fn new(counts: [u32; 3], edges: Vec<[u32; 3]>) -> PyResult<Self> {
        let inner = cutnpeel::TemporalGraph::from_edges(counts, edges).map_err(to_py)?;
        Ok(PyTemporalGraph { inner })
    }

    /// Parses a whitespace separated `source destination timestamp` list.
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        let inner = cutnpeel::TemporalGraph::load_edge_list_str(text).map_err(to_py)?;
        Ok(PyTemporalGraph { inner })
    }

    #[staticmethod]
    fn load(path: std::path::PathBuf) -> PyResult<Self> {
        let text = std::fs::read_to_string(&path).map_err(|e| PyIOError::new_err(e.to_string()))?;
        Self::from_text(&text)
    }

    fn to_text(&self) -> PyResult<String> {
        let mut buf = Vec::new();
        self.inner.write_edge_list(&mut buf).map_err(to_py)?;
        Ok(String::from_utf8_lossy(&buf).into_owned())
    }

    #[getter]
    fn counts(&self) -> [u32; 3] {
        self.inner.counts()
    }

    #[getter]
    fn num_edges(&self) -> usize {
        self.inner.num_edges()
    }

    fn edges(&self) -> Vec<[u32; 3]> {
        self.inner.edges().to_vec()
    }

    fn induced_edge_count(&self, sources: Vec<u32>, destinations: Vec<u32>, timestamps: Vec<u32>) -> PyResult<u64> {
        let subset = ObjectSubset::new(sources, destinations, timestamps);
        self.inner.induced_edge_count(&subset).map_err(to_py)
    }

    fn __len__(&self) -> usize {
        self.inner.num_edges()
    }

    fn __repr__(&self) -> String {
        let [s, d, t] = self.inner.counts();
        format!(
            "TemporalGraph(|S|={s}, |D|={d}, |T|={t}, |E|={})",
            self.inner.num_edges()
        )
    }
}

#[pyclass(name = "NearBiclique", module = "cutnpeel", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
pub struct PyNearBiclique {
    sources: Vec<u32>,
    destinations: Vec<u32>,
    timestamps: Vec<u32>,
    edge_count: u64,
    missing_count: u64,
    acceptance_saving: f64,
    density: f64,
}

#[pymethods]
impl PyNearBiclique {
    fn __repr__(&self) -> String {
        format!(
            "NearBiclique({}x{}x{}, edges={}, density={:.3})",
            self.sources.len(),
            self.destinations.len(),
            self.timestamps.len(),
            self.edge_count,
            self.density
        )
    }
}

impl From<&cutnpeel::NearBiclique> for PyNearBiclique {
    fn from(b: &cutnpeel::NearBiclique) -> Self {
        PyNearBiclique {
            sources: b.objects.sources.clone(),
            destinations: b.objects.destinations.clone(),
            timestamps: b.objects.timestamps.clone(),
            edge_count: b.edge_count,
            missing_count: b.missing_count,
            acceptance_saving: b.acceptance_saving,
            density: b.density(),
        }
    }
}

#[pyclass(name = "MiningResult", module = "cutnpeel", frozen, get_all)]
pub struct PyMiningResult {
    bicliques: Vec<PyNearBiclique>,
    total_bits: f64,
    relative_cost: f64,
    residual_edges: usize,
    iterations: usize,
    elapsed_seconds: f64,
}

/// Mines near bi-cliques with `"cutnpeel"` (default) or `"peel"`.
#[pyfunction]
#[pyo3(signature = (graph, algorithm = "cutnpeel", iters = 80, alpha = 0.8, seed = 0, parallel = false))]
fn mine(
    py: Python<'_>,
    graph: &PyTemporalGraph,
    algorithm: &str,
    iters: u32,
    alpha: f64,
    seed: u64,
    parallel: bool,
) -> PyResult<PyMiningResult> {
    let algorithm: Algorithm = algorithm.parse().map_err(to_py)?;
    let config = DriverConfig {
        max_iterations: iters,
        threshold_decay: alpha,
        seed,
        parallel,
        ..Default::default()
    };
    config.validate().map_err(to_py)?;
    let report = py
        .detach(|| cutnpeel::mine_report(&graph.inner, algorithm, &config))
        .map_err(to_py)?;
    Ok(PyMiningResult {
        bicliques: report.bicliques.iter().map(PyNearBiclique::from).collect(),
        total_bits: report.cost.total_bits,
        relative_cost: report.relative_cost,
        residual_edges: report.residual_edges,
        iterations: report.iterations.len(),
        elapsed_seconds: report.elapsed_seconds,
    })
}

fn subsets(bicliques: Vec<Lists>) -> Vec<ObjectSubset> {
    bicliques
        .into_iter()
        .map(|(s, d, t)| ObjectSubset::new(s, d, t))
        .collect()
}

/// Returns `(preciseness, exhaustiveness, conciseness, total, relative)` in bits.
#[pyfunction]
fn total_cost(graph: &PyTemporalGraph, bicliques: Vec<Lists>) -> PyResult<(f64, f64, f64, f64, f64)> {
    let cost = core_total_cost(&graph.inner, &subsets(bicliques)).map_err(to_py)?;
    let rel = relative_cost(&cost, &Universe::of(&graph.inner)).map_err(to_py)?;
    Ok((
        cost.preciseness_bits,
        cost.exhaustiveness_bits,
        cost.conciseness_bits,
        cost.total_bits,
        rel,
    ))
}

/// Saving of a single bi-clique against the empty model.
#[pyfunction]
fn saving(graph: &PyTemporalGraph, sources: Vec<u32>, destinations: Vec<u32>, timestamps: Vec<u32>) -> PyResult<f64> {
    let subset = ObjectSubset::new(sources, destinations, timestamps);
    let edges = graph.inner.induced_edge_count(&subset).map_err(to_py)?;
    Ok(Universe::of(&graph.inner).saving(&subset, edges))
}

/// Encodes a graph under the given bi-cliques as a text model.
#[pyfunction]
fn compress(graph: &PyTemporalGraph, bicliques: Vec<Lists>) -> PyResult<String> {
    let stream = encode(&graph.inner, &subsets(bicliques)).map_err(to_py)?;
    Ok(model_to_string(&stream))
}

#[pyfunction]
fn decompress(model: &str) -> PyResult<PyTemporalGraph> {
    let stream = read_model(model.as_bytes()).map_err(to_py)?;
    let inner = decode(&stream).map_err(to_py)?;
    Ok(PyTemporalGraph { inner })
}

#[pyfunction]
#[pyo3(signature = (num_edges, seed = 0))]
fn gen_er(num_edges: u64, seed: u64) -> PyResult<PyTemporalGraph> {
    let inner = core_gen_er(num_edges, seed).map_err(to_py)?;
    Ok(PyTemporalGraph { inner })
}

/// Plants `WxHxT[:fill]` blocks on disjoint objects; returns the graph and
/// the planted object lists.
#[pyfunction]
#[pyo3(signature = (specs, seed = 0))]
fn plant(specs: Vec<String>, seed: u64) -> PyResult<(PyTemporalGraph, Vec<Lists>)> {
    let specs: Vec<PlantSpec> = specs
        .iter()
        .map(|s| s.parse())
        .collect::<Result<_, _>>()
        .map_err(to_py)?;
    let (inner, truth) = core_plant(None, &specs, seed).map_err(to_py)?;
    let truth = truth
        .into_iter()
        .map(|s| (s.sources, s.destinations, s.timestamps))
        .collect();
    Ok((PyTemporalGraph { inner }, truth))
}

#[pymodule]
fn cutnpeel_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTemporalGraph>()?;
    m.add_class::<PyNearBiclique>()?;
    m.add_class::<PyMiningResult>()?;
    m.add_function(wrap_pyfunction!(mine, m)?)?;
    m.add_function(wrap_pyfunction!(total_cost, m)?)?;
    m.add_function(wrap_pyfunction!(saving, m)?)?;
    m.add_function(wrap_pyfunction!(compress, m)?)?;
    m.add_function(wrap_pyfunction!(decompress, m)?)?;
    m.add_function(wrap_pyfunction!(gen_er, m)?)?;
    m.add_function(wrap_pyfunction!(plant, m)?)?;
    Ok(())
}
