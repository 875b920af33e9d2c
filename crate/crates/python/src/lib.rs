use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use polyindex::indexdb::{build_database, load_database, save_database, BuildParams, ViewSpec, VoteMode};
use polyindex::linedraw::split_image_graph;
use polyindex::synth::{evaluate, synthesize, SceneOptions, SynthConfig};
use polyindex::{CatalogueMode, ErrorKind, RunConfig};

fn to_py(e: impl Into<polyindex::Error>) -> PyErr {
    let e = e.into();
    match e.kind() {
        ErrorKind::Io => PyIOError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn parse_mode(mode: &str) -> PyResult<CatalogueMode> {
    match mode {
        "weighted" => Ok(CatalogueMode::Weighted),
        "binary" => Ok(CatalogueMode::Binary),
        other => Err(PyValueError::new_err(format!("mode must be 'weighted' or 'binary', not '{other}'"))),
    }
}

/// Undirected graph with positive integer edge weights.
#[pyclass(name = "Graph", module = "pypolyindex", frozen, from_py_object)]
#[derive(Clone)]
struct PyGraph {
    inner: polyindex::WeightedGraph,
}

#[pymethods]
impl PyGraph {
    /// `edges` holds `(i, j)` or `(i, j, weight)` with 0-based nodes.
    #[new]
    #[pyo3(signature = (node_count, edges))]
    fn new(node_count: usize, edges: Vec<Vec<u64>>) -> PyResult<Self> {
        let mut triples = Vec::with_capacity(edges.len());
        for e in edges {
            let (a, b, w) = match e[..] {
                [a, b] => (a, b, 1),
                [a, b, w] => (a, b, w),
                _ => return Err(PyValueError::new_err("edges are (i, j) or (i, j, weight)")),
            };
            let w = u32::try_from(w).map_err(|_| PyValueError::new_err("weight out of range"))?;
            triples.push((a as usize, b as usize, w));
        }
        let inner = polyindex::WeightedGraph::new(node_count, triples).map_err(to_py)?;
        Ok(Self { inner })
    }

    /// Every record of the graph text format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Vec<(String, PyGraph)>> {
        let records = polyindex::graph::format::parse_graphs(text).map_err(to_py)?;
        Ok(records.into_iter().map(|r| (r.name, PyGraph { inner: r.graph })).collect())
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.inner.node_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn edges(&self) -> Vec<(usize, usize, u32)> {
        self.inner.edges().iter().map(|e| (e.a, e.b, e.weight)).collect()
    }

    fn laplacian(&self) -> Vec<Vec<i64>> {
        self.inner.laplacian().rows()
    }

    /// Coefficients of the d2 polynomial, leading first.
    #[pyo3(signature = (n_max = 12))]
    fn d2<'py>(&self, py: Python<'py>, n_max: usize) -> PyResult<Bound<'py, PyList>> {
        let sig = polyindex::d2_signature(&self.inner.laplacian(), n_max).map_err(to_py)?;
        PyList::new(py, sig.coefficients())
    }

    /// Coefficients of the characteristic polynomial of the Laplacian, leading first.
    #[pyo3(signature = (n_max = 12))]
    fn char_poly<'py>(&self, py: Python<'py>, n_max: usize) -> PyResult<Bound<'py, PyList>> {
        let sig = polyindex::char_signature(&self.inner.laplacian(), n_max).map_err(to_py)?;
        PyList::new(py, sig.coefficients())
    }

    fn permute(&self, perm: Vec<usize>) -> PyResult<Self> {
        Ok(Self { inner: self.inner.permute(&perm).map_err(to_py)? })
    }

    fn to_text(&self, name: &str) -> String {
        polyindex::graph::format::write_graph(name, &self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Graph(nodes={}, edges={})", self.inner.node_count(), self.inner.edge_count())
    }
}

/// Line drawing of junctions and straight segments.
#[pyclass(name = "LineDrawing", module = "pypolyindex", frozen)]
struct PyLineDrawing {
    inner: polyindex::LineDrawing,
}

#[pymethods]
impl PyLineDrawing {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Self { inner: polyindex::LineDrawing::parse(text).map_err(to_py)? })
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    #[getter]
    fn junction_count(&self) -> usize {
        self.inner.junctions().len()
    }

    #[getter]
    fn segment_count(&self) -> usize {
        self.inner.segments().len()
    }

    /// Junction type name of each junction id.
    #[pyo3(signature = (collinear_deg = 10.0))]
    fn junction_types(&self, collinear_deg: f64) -> Vec<(String, String)> {
        (0..self.inner.junctions().len())
            .map(|j| (self.inner.junctions()[j].id.clone(), format!("{:?}", self.inner.classify(j, collinear_deg))))
            .collect()
    }

    /// Weighted image graphs after pruning, T cuts and fusion.
    #[pyo3(signature = (collinear_deg = 10.0))]
    fn image_graphs(&self, collinear_deg: f64) -> PyResult<Vec<PyGraph>> {
        let run = RunConfig { collinear_deg, ..RunConfig::default() };
        run.validate().map_err(to_py)?;
        let graphs = split_image_graph(&self.inner, &run.drawing_options()).map_err(to_py)?;
        Ok(graphs.into_iter().map(|inner| PyGraph { inner }).collect())
    }
}

/// Three-layer model database.
#[pyclass(name = "Database", module = "pypolyindex", frozen)]
struct PyDatabase {
    inner: polyindex::ModelDatabase,
}

#[pymethods]
impl PyDatabase {
    /// `views` holds `(object, view, graph)` triples.
    #[staticmethod]
    #[pyo3(signature = (views, p = 2, min_nodes = 5, max_nodes = 10, mode = "weighted", n_max = 12))]
    fn build(
        views: Vec<(String, String, PyGraph)>,
        p: usize,
        min_nodes: usize,
        max_nodes: usize,
        mode: &str,
        n_max: usize,
    ) -> PyResult<Self> {
        let run = RunConfig { radius: p, min_nodes, max_nodes, mode: parse_mode(mode)?, signature_limit: n_max, ..RunConfig::default() };
        run.validate().map_err(to_py)?;
        let specs: Vec<ViewSpec> = views.into_iter().map(|(o, v, g)| ViewSpec::new(o, v, g.inner)).collect();
        Ok(Self { inner: build_database(&specs, BuildParams::from(&run)).map_err(to_py)? })
    }

    #[staticmethod]
    fn load(text: &str) -> PyResult<Self> {
        Ok(Self { inner: load_database(text).map_err(to_py)? })
    }

    fn save(&self) -> PyResult<String> {
        save_database(&self.inner).map_err(to_py)
    }

    fn views(&self) -> Vec<String> {
        self.inner.views().iter().map(|v| v.id.clone()).collect()
    }

    fn objects(&self) -> Vec<(String, Vec<String>)> {
        self.inner
            .objects()
            .iter()
            .map(|o| (o.id.clone(), o.views.iter().map(|&v| self.inner.views()[v].id.clone()).collect()))
            .collect()
    }

    /// Votes per view for a scene given as a list of graphs.
    #[pyo3(signature = (scene, per_occurrence = false))]
    fn recognize<'py>(&self, py: Python<'py>, scene: Vec<PyGraph>, per_occurrence: bool) -> PyResult<Bound<'py, PyDict>> {
        let graphs: Vec<polyindex::WeightedGraph> = scene.into_iter().map(|g| g.inner).collect();
        let mode = if per_occurrence { VoteMode::PerOccurrence } else { VoteMode::PerView };
        let tally = self.inner.recognize_with(&graphs, self.inner.params().neighborhoods, mode);
        let out = PyDict::new(py);
        for (id, score) in tally.view_ids().iter().zip(tally.scores()) {
            out.set_item(id, score)?;
        }
        Ok(out)
    }

    fn report<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let r = self.inner.report();
        let out = PyDict::new(py);
        out.set_item("objects", r.objects)?;
        out.set_item("views", r.views)?;
        out.set_item("entries", r.entries)?;
        out.set_item("subgraphs", r.subgraphs)?;
        out.set_item("sharing_ratio", r.sharing_ratio)?;
        out.set_item("accidents", r.accidents)?;
        Ok(out)
    }

    fn __repr__(&self) -> String {
        format!("Database(views={}, entries={})", self.inner.views().len(), self.inner.entry_count())
    }
}

/// Signature collision counts among connected graphs on `n` nodes.
#[pyfunction]
fn collision_study<'py>(py: Python<'py>, n: usize) -> PyResult<Bound<'py, PyDict>> {
    let r = polyindex::study::collision_study(n).map_err(to_py)?;
    let out = PyDict::new(py);
    out.set_item("n", r.nodes)?;
    out.set_item("classes", r.classes)?;
    out.set_item("d2_collisions", r.d2_pairs)?;
    out.set_item("char_collisions", r.char_pairs)?;
    Ok(out)
}

type TextTriple = (String, String, String);

/// Synthetic views and degraded scenes as drawing text.
#[pyfunction]
#[pyo3(signature = (seed = 0, objects = 6, views = 2, scenes = 9, deletion = 0.15, occluders = 1, jitter = 0.004))]
fn synthesize_set(
    seed: u64,
    objects: usize,
    views: usize,
    scenes: usize,
    deletion: f64,
    occluders: usize,
    jitter: f64,
) -> PyResult<(Vec<TextTriple>, Vec<TextTriple>)> {
    let cfg = SynthConfig {
        objects,
        views_per_object: views,
        scenes_per_view: scenes,
        scene: SceneOptions { deletion_rate: deletion, occluders, jitter, ..SceneOptions::default() },
        seed,
        ..SynthConfig::default()
    };
    let set = synthesize(&cfg).map_err(to_py)?;
    let views = set.views.iter().map(|v| (v.object.clone(), v.view.clone(), v.drawing.to_text())).collect();
    let scenes = set.scenes.iter().map(|s| (s.id.clone(), s.truth.clone(), s.drawing.to_text())).collect();
    Ok((views, scenes))
}

/// Top-1 accuracy and median score ratio on a synthetic set.
#[pyfunction]
#[pyo3(signature = (seed = 0, objects = 6, deletion = 0.15, occluders = 1))]
fn evaluate_synthetic(seed: u64, objects: usize, deletion: f64, occluders: usize) -> PyResult<(f64, f64)> {
    let cfg = SynthConfig {
        objects,
        scene: SceneOptions { deletion_rate: deletion, occluders, ..SceneOptions::default() },
        seed,
        ..SynthConfig::default()
    };
    let set = synthesize(&cfg).map_err(to_py)?;
    let eval = evaluate(&set, &RunConfig::default()).map_err(to_py)?;
    Ok((eval.accuracy(), eval.median_ratio()))
}

#[pymodule]
pub fn pypolyindex(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyLineDrawing>()?;
    m.add_class::<PyDatabase>()?;
    m.add_function(wrap_pyfunction!(collision_study, m)?)?;
    m.add_function(wrap_pyfunction!(synthesize_set, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_synthetic, m)?)?;
    Ok(())
}
