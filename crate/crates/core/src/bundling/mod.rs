//! Edge-Path bundling: every long edge whose endpoints are joined by a
//! short enough weighted shortest path is drawn along that path.
//!
//! Edges are processed by decreasing weight (`length^d`, ties by ascending
//! id). An edge that lies on an accepted path is locked and never bundled
//! itself; a bundled edge is removed from all later searches.

mod curve;
mod search;

use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

pub use curve::{curve_polyline, smooth_control_points};
pub use search::{constrained_dijkstra, Budget, PathResult, PathSearch};

use crate::drawing::{Drawing, DrawingEdge};
use crate::error::{Error, Result};
use crate::geometry::{polyline_length, Point};
use crate::graph::{EdgeId, Graph, Layout, VertexId};

/// Largest accepted smoothing factor; each step doubles the control points.
pub const MAX_SMOOTHING: u32 = 16;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdMode {
    /// Compare the geometric path length with `k` times the edge length.
    #[default]
    Geometry,
    /// Compare the summed path weight with `k` times the edge weight.
    Weight,
}

impl FromStr for ThresholdMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "geometry" => Ok(Self::Geometry),
            "weight" => Ok(Self::Weight),
            other => Err(format!("unknown threshold mode `{other}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BundlingParams {
    /// Maximum distortion `k`; must exceed 1.
    pub max_distortion: f64,
    /// Edge weight exponent `d`.
    pub weight_exponent: f64,
    pub smoothing: u32,
    pub samples_per_segment: usize,
    pub threshold: ThresholdMode,
}

impl Default for BundlingParams {
    fn default() -> Self {
        Self {
            max_distortion: 2.0,
            weight_exponent: 2.0,
            smoothing: 2,
            samples_per_segment: 8,
            threshold: ThresholdMode::Geometry,
        }
    }
}

impl BundlingParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.max_distortion.is_finite() && self.max_distortion > 1.0) {
            return Err(Error::InvalidParameter(format!(
                "k must be a finite value > 1, got {}",
                self.max_distortion
            )));
        }
        if !(self.weight_exponent.is_finite() && self.weight_exponent >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "d must be a finite value >= 0, got {}",
                self.weight_exponent
            )));
        }
        if self.smoothing == 0 || self.smoothing > MAX_SMOOTHING {
            return Err(Error::InvalidParameter(format!(
                "smoothing must be in 1..={MAX_SMOOTHING}, got {}",
                self.smoothing
            )));
        }
        if self.samples_per_segment < 2 {
            return Err(Error::InvalidParameter(
                "curve samples per segment must be >= 2".into(),
            ));
        }
        Ok(())
    }
}

/// Per-edge state of a bundling run.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeState {
    pub lock: Vec<bool>,
    pub skip: Vec<bool>,
    pub weight: Vec<f64>,
}

/// What happened to one edge in processing order.
#[derive(Clone, Debug, PartialEq)]
pub enum StepOutcome {
    /// Already on an accepted path.
    Locked(EdgeId),
    /// No path, or the path was over budget.
    Rejected(EdgeId),
    Bundled(EdgeId, PathResult),
}

/// Step-by-step bundling driver. [`edge_path_bundle`] runs it to completion.
pub struct Bundler<'a> {
    graph: &'a Graph,
    layout: &'a Layout,
    params: BundlingParams,
    state: EdgeState,
    lengths: Vec<f64>,
    order: Vec<EdgeId>,
    cursor: usize,
    paths: Vec<Option<PathResult>>,
    search: PathSearch,
}

impl<'a> Bundler<'a> {
    pub fn new(graph: &'a Graph, layout: &'a Layout, params: BundlingParams) -> Result<Self> {
        params.validate()?;
        layout.check_covers(graph)?;
        let m = graph.edge_count();
        let lengths: Vec<f64> = graph.edges().iter().map(|e| layout.euclidean_length(e)).collect();
        let weight: Vec<f64> = lengths.iter().map(|l| l.powf(params.weight_exponent)).collect();
        let mut order: Vec<EdgeId> = (0..m).collect();
        order.sort_by(|&a, &b| weight[b].total_cmp(&weight[a]).then(a.cmp(&b)));
        Ok(Self {
            graph,
            layout,
            params,
            state: EdgeState {
                lock: vec![false; m],
                skip: vec![false; m],
                weight,
            },
            lengths,
            order,
            cursor: 0,
            paths: vec![None; m],
            search: PathSearch::new(graph.vertex_count()),
        })
    }

    pub fn state(&self) -> &EdgeState {
        &self.state
    }

    /// Edge ids in processing order.
    pub fn order(&self) -> &[EdgeId] {
        &self.order
    }

    /// Processes the next edge; `None` once all edges are done.
    pub fn step(&mut self) -> Option<StepOutcome> {
        let &e = self.order.get(self.cursor)?;
        self.cursor += 1;
        if self.state.lock[e] {
            return Some(StepOutcome::Locked(e));
        }
        let edge = self.graph.edge(e);
        let length = self.lengths[e];
        // coincident endpoints: nothing to route around
        if length == 0.0 {
            return Some(StepOutcome::Rejected(e));
        }
        self.state.skip[e] = true;
        let budget = match self.params.threshold {
            ThresholdMode::Geometry => Budget::Geometry(self.params.max_distortion * length),
            ThresholdMode::Weight => Budget::Weight(self.params.max_distortion * self.state.weight[e]),
        };
        let found = self.search.run(
            self.graph,
            self.layout.positions(),
            &self.state.weight,
            &self.lengths,
            &self.state.skip,
            edge.source,
            edge.target,
            budget,
        );
        match found {
            None => {
                self.state.skip[e] = false;
                Some(StepOutcome::Rejected(e))
            }
            Some(path) => {
                for &m in &path.edges {
                    self.state.lock[m] = true;
                }
                self.paths[e] = Some(path.clone());
                Some(StepOutcome::Bundled(e, path))
            }
        }
    }

    pub fn finish(mut self) -> BundledDrawing {
        while self.step().is_some() {}
        let Self {
            graph,
            layout,
            params,
            state,
            paths,
            ..
        } = self;

        let (control_points, render_polyline): (Vec<_>, Vec<_>) = graph
            .edges()
            .par_iter()
            .map(|e| {
                let controls = match &paths[e.id] {
                    Some(p) => {
                        let raw: Vec<Point> = p.vertices.iter().map(|&v| layout.position(v)).collect();
                        smooth_control_points(&raw, params.smoothing)
                    }
                    None => vec![layout.position(e.source), layout.position(e.target)],
                };
                let curve = curve_polyline(&controls, params.samples_per_segment);
                (controls, curve)
            })
            .unzip();

        BundledDrawing {
            graph: graph.clone(),
            layout: layout.clone(),
            params,
            paths: paths.into_iter().map(|p| p.map(|p| p.vertices)).collect(),
            bundled: state.skip,
            locked: state.lock,
            control_points,
            render_polyline,
        }
    }
}

/// Result of a bundling run.
#[derive(Clone, Debug)]
pub struct BundledDrawing {
    pub graph: Graph,
    pub layout: Layout,
    pub params: BundlingParams,
    /// Vertex path of each bundled edge (before smoothing).
    pub paths: Vec<Option<Vec<VertexId>>>,
    pub bundled: Vec<bool>,
    pub locked: Vec<bool>,
    /// Smoothed control points; first and last are the endpoint positions.
    pub control_points: Vec<Vec<Point>>,
    pub render_polyline: Vec<Vec<Point>>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BundleStats {
    pub bundled_count: usize,
    pub locked_count: usize,
    pub unbundled_count: usize,
    pub max_path_hops: usize,
}

/// Bundles `g` as drawn by `layout`.
pub fn edge_path_bundle(g: &Graph, layout: &Layout, params: BundlingParams) -> Result<BundledDrawing> {
    Ok(Bundler::new(g, layout, params)?.finish())
}

impl BundledDrawing {
    pub fn stats(&self) -> BundleStats {
        let bundled_count = self.bundled.iter().filter(|&&b| b).count();
        let locked_count = self.locked.iter().filter(|&&l| l).count();
        BundleStats {
            bundled_count,
            locked_count,
            unbundled_count: self.graph.edge_count() - bundled_count - locked_count,
            max_path_hops: self
                .paths
                .iter()
                .flatten()
                .map(|p| p.len() - 1)
                .max()
                .unwrap_or(0),
        }
    }

    /// Geometric length of the vertex path of a bundled edge.
    pub fn path_length(&self, e: EdgeId) -> Option<f64> {
        self.paths[e].as_ref().map(|p| {
            let pts: Vec<Point> = p.iter().map(|&v| self.layout.position(v)).collect();
            polyline_length(&pts)
        })
    }

    /// Verifies the structural guarantees of the algorithm: bundled edges
    /// follow real (directed) paths within the distortion budget, and no
    /// edge is both bundled and locked.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let k = self.params.max_distortion;
        for e in self.graph.edges() {
            let i = e.id;
            if self.bundled[i] && self.locked[i] {
                return Err(format!("edge {i} is both bundled and locked"));
            }
            let cps = &self.control_points[i];
            if cps.first() != Some(&self.layout.position(e.source))
                || cps.last() != Some(&self.layout.position(e.target))
            {
                return Err(format!("edge {i} control points do not end at its endpoints"));
            }
            match &self.paths[i] {
                None => {
                    if self.bundled[i] {
                        return Err(format!("edge {i} is bundled without a path"));
                    }
                    if cps.len() != 2 {
                        return Err(format!("unbundled edge {i} has {} control points", cps.len()));
                    }
                }
                Some(path) => {
                    if path.first() != Some(&e.source) || path.last() != Some(&e.target) {
                        return Err(format!("edge {i} path does not join its endpoints"));
                    }
                    for w in path.windows(2) {
                        if !self.graph.has_arc(w[0], w[1]) {
                            return Err(format!(
                                "edge {i} path step {} -> {} is not an edge of the graph",
                                w[0], w[1]
                            ));
                        }
                    }
                    if self.params.threshold == ThresholdMode::Geometry {
                        let len = self.path_length(i).unwrap();
                        let bound = k * self.layout.euclidean_length(e);
                        if len > bound * (1.0 + 1e-9) {
                            return Err(format!(
                                "edge {i} path length {len} exceeds the budget {bound}"
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Interchange form: render curves as polylines, plus control points and
    /// the bundled flag.
    pub fn to_drawing(&self) -> Drawing {
        let edges = self
            .graph
            .edges()
            .iter()
            .map(|e| DrawingEdge {
                s: e.source,
                t: e.target,
                polyline: self.render_polyline[e.id].clone(),
                bundled: Some(self.bundled[e.id]),
                control_points: Some(self.control_points[e.id].clone()),
            })
            .collect();
        Drawing {
            directed: self.graph.is_directed(),
            vertices: self.layout.positions().to_vec(),
            edges,
        }
    }
}
