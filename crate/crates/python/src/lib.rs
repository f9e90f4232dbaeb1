//! Python bindings: graphs, drawings, the bundler, metrics and rendering.
//!
//! Structured results (bundle statistics, metric reports) are returned as
//! plain dicts.

use std::path::Path;

use edgepath::bundling::{edge_path_bundle, BundlingParams};
use edgepath::datasets::{self, CubesSpec, GeometricSpec, NoiseSpec, UniformSpec};
use edgepath::io::{self, Format};
use edgepath::metrics::{self, AmbiguityConfig, MetricsConfig, RasterStyle};
use edgepath::render::{self, RenderStyle};
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

fn to_py(e: edgepath::Error) -> PyErr {
    match e {
        edgepath::Error::Io(e) => PyIOError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn parse<T: std::str::FromStr<Err = String>>(s: &str) -> PyResult<T> {
    s.parse().map_err(PyValueError::new_err)
}

fn json_value<'py>(py: Python<'py>, value: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// A graph together with its vertex positions.
#[pyclass(name = "Graph", module = "edgepath_py")]
pub struct PyGraph {
    graph: edgepath::Graph,
    layout: edgepath::Layout,
}

#[pymethods]
impl PyGraph {
    /// Parses the edge-list text format.
    #[staticmethod]
    fn from_edge_list(text: &str) -> PyResult<Self> {
        let loaded = io::parse_edge_list(text, Path::new("<string>")).map_err(to_py)?;
        Ok(Self {
            graph: loaded.graph,
            layout: loaded.layout,
        })
    }

    /// Loads a file; `format` is "edge-list" or "trail-set".
    #[staticmethod]
    #[pyo3(signature = (path, format = "edge-list"))]
    fn load(path: &str, format: &str) -> PyResult<Self> {
        let loaded = io::load_graph(path, parse::<Format>(format)?).map_err(to_py)?;
        Ok(Self {
            graph: loaded.graph,
            layout: loaded.layout,
        })
    }

    fn to_edge_list(&self) -> String {
        io::write_edge_list(&self.graph, &self.layout)
    }

    /// Same graph with the directedness flag changed.
    fn with_directed(&self, directed: bool) -> Self {
        Self {
            graph: self.graph.with_directed(directed).0,
            layout: self.layout.clone(),
        }
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    #[getter]
    fn directed(&self) -> bool {
        self.graph.is_directed()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.graph.edges().iter().map(|e| (e.source, e.target)).collect()
    }

    fn positions(&self) -> Vec<(f64, f64)> {
        self.layout.positions().iter().map(|p| (p.x, p.y)).collect()
    }

    fn component_count(&self) -> usize {
        self.graph.component_count()
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(vertices={}, edges={}, directed={})",
            self.graph.vertex_count(),
            self.graph.edge_count(),
            self.graph.is_directed()
        )
    }
}

/// A drawing in the JSON interchange format.
#[pyclass(name = "Drawing", module = "edgepath_py")]
pub struct PyDrawing {
    inner: edgepath::Drawing,
}

#[pymethods]
impl PyDrawing {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self {
            inner: edgepath::Drawing::from_json(text).map_err(to_py)?,
        })
    }

    #[staticmethod]
    fn read(path: &str) -> PyResult<Self> {
        Ok(Self {
            inner: edgepath::Drawing::read(path).map_err(to_py)?,
        })
    }

    /// Straight-line drawing of `graph`.
    #[staticmethod]
    fn straight(graph: &PyGraph) -> Self {
        Self {
            inner: edgepath::Drawing::straight(&graph.graph, &graph.layout),
        }
    }

    fn to_json(&self) -> PyResult<String> {
        self.inner.to_json().map_err(to_py)
    }

    fn write(&self, path: &str) -> PyResult<()> {
        self.inner.write(path).map_err(to_py)
    }

    /// Graph recovered from the drawing's endpoints.
    fn graph(&self) -> PyResult<PyGraph> {
        let (graph, layout) = self.inner.graph().map_err(to_py)?;
        Ok(PyGraph { graph, layout })
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edges.len()
    }

    fn polyline(&self, edge: usize) -> PyResult<Vec<(f64, f64)>> {
        let e = self
            .inner
            .edges
            .get(edge)
            .ok_or_else(|| PyValueError::new_err(format!("no edge {edge}")))?;
        Ok(e.polyline.iter().map(|p| (p.x, p.y)).collect())
    }

    fn __repr__(&self) -> String {
        format!(
            "Drawing(vertices={}, edges={})",
            self.inner.vertices.len(),
            self.inner.edges.len()
        )
    }
}

#[pyfunction]
#[pyo3(signature = (variant = "1R", n = 100, seed = 0, directed = false, side = 1.0, extra_edges = None))]
fn cubes(variant: &str, n: usize, seed: u64, directed: bool, side: f64, extra_edges: Option<usize>) -> PyResult<PyGraph> {
    let spec = CubesSpec {
        total_vertices: n,
        side,
        variant: parse(variant)?,
        directed,
        seed,
        extra_edges_per_square: extra_edges,
    };
    let (graph, layout) = datasets::generate_cubes(&spec).map_err(to_py)?;
    Ok(PyGraph { graph, layout })
}

#[pyfunction]
#[pyo3(signature = (n = 1000, seed = 0))]
fn noise(n: usize, seed: u64) -> PyResult<PyGraph> {
    let (graph, layout) = datasets::generate_noise(&NoiseSpec {
        total_vertices: n,
        seed,
    })
    .map_err(to_py)?;
    Ok(PyGraph { graph, layout })
}

#[pyfunction]
#[pyo3(signature = (n = 1700, edges = 6500, seed = 0, directed = false))]
fn geometric(n: usize, edges: usize, seed: u64, directed: bool) -> PyResult<PyGraph> {
    let (graph, layout) = datasets::generate_geometric(&GeometricSpec {
        total_vertices: n,
        edges,
        directed,
        seed,
    })
    .map_err(to_py)?;
    Ok(PyGraph { graph, layout })
}

#[pyfunction]
#[pyo3(signature = (n = 500, edges = 2000, seed = 0, directed = false))]
fn uniform(n: usize, edges: usize, seed: u64, directed: bool) -> PyResult<PyGraph> {
    let (graph, layout) = datasets::generate_uniform(&UniformSpec {
        total_vertices: n,
        edges,
        directed,
        seed,
    })
    .map_err(to_py)?;
    Ok(PyGraph { graph, layout })
}

/// Bundles `graph`; returns the drawing and a dict of statistics.
#[pyfunction]
#[pyo3(signature = (graph, k = 2.0, d = 2.0, smoothing = 2, samples = 8, threshold_on = "geometry"))]
fn bundle<'py>(
    py: Python<'py>,
    graph: &PyGraph,
    k: f64,
    d: f64,
    smoothing: u32,
    samples: usize,
    threshold_on: &str,
) -> PyResult<(PyDrawing, Bound<'py, PyAny>)> {
    let params = BundlingParams {
        max_distortion: k,
        weight_exponent: d,
        smoothing,
        samples_per_segment: samples,
        threshold: parse(threshold_on)?,
    };
    let bundled = py
        .detach(|| edge_path_bundle(&graph.graph, &graph.layout, params))
        .map_err(to_py)?;
    let stats = json_value(py, &bundled.stats())?;
    Ok((PyDrawing { inner: bundled.to_drawing() }, stats))
}

/// Ink, distortion and ambiguity of `drawing` as a dict. The baseline
/// defaults to the straight-line drawing and the graph to the one recovered
/// from `drawing`.
#[pyfunction]
#[pyo3(signature = (drawing, baseline = None, graph = None, theta = 7.5, deltas = vec![1, 2, 3, 4, 5], cell_px = 8, window = 3, width = 1600))]
#[allow(clippy::too_many_arguments)]
fn evaluate<'py>(
    py: Python<'py>,
    drawing: &PyDrawing,
    baseline: Option<&PyDrawing>,
    graph: Option<&PyGraph>,
    theta: f64,
    deltas: Vec<usize>,
    cell_px: usize,
    window: usize,
    width: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let (g, layout) = match graph {
        Some(g) => (g.graph.clone(), g.layout.clone()),
        None => drawing.inner.graph().map_err(to_py)?,
    };
    let baseline = match baseline {
        Some(b) => b.inner.clone(),
        None => edgepath::Drawing::straight(&g, &layout),
    };
    let config = MetricsConfig {
        raster: RasterStyle {
            width_px: width,
            ..RasterStyle::default()
        },
        ambiguity: AmbiguityConfig {
            angle_threshold_deg: theta,
            cell_px,
            window_cells: window,
            delta_range: deltas,
            ..AmbiguityConfig::default()
        },
        ..MetricsConfig::default()
    };
    let report = py
        .detach(|| metrics::evaluate(&drawing.inner, &baseline, &g, &config))
        .map_err(to_py)?;
    json_value(py, &report)
}

/// SVG text of `drawing`; `mode` is "plain", "angle" or "distortion".
#[pyfunction]
#[pyo3(signature = (drawing, mode = "plain", background = "white", width = 1600))]
fn render_svg(drawing: &PyDrawing, mode: &str, background: &str, width: usize) -> PyResult<String> {
    let style = RenderStyle {
        width_px: width,
        mode: parse(mode)?,
        background: parse(background)?,
        ..RenderStyle::default()
    };
    render::render_svg(&drawing.inner, &style).map_err(to_py)
}

/// Binary PGM of the drawing, ink high.
#[pyfunction]
#[pyo3(signature = (drawing, width = 1600))]
fn rasterize_pgm(drawing: &PyDrawing, width: usize) -> PyResult<Vec<u8>> {
    let style = RasterStyle {
        width_px: width,
        ..RasterStyle::default()
    };
    Ok(metrics::rasterize(&drawing.inner, &style).map_err(to_py)?.to_pgm())
}

#[pymodule]
fn edgepath_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyDrawing>()?;
    m.add_function(wrap_pyfunction!(cubes, m)?)?;
    m.add_function(wrap_pyfunction!(noise, m)?)?;
    m.add_function(wrap_pyfunction!(geometric, m)?)?;
    m.add_function(wrap_pyfunction!(uniform, m)?)?;
    m.add_function(wrap_pyfunction!(bundle, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(render_svg, m)?)?;
    m.add_function(wrap_pyfunction!(rasterize_pgm, m)?)?;
    Ok(())
}
