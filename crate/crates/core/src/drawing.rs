//! The JSON drawing interchange shared by the bundler, the metrics and the
//! renderer. Third-party bundler output enters the toolkit through it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{polyline_length, BoundingBox, Point};
use crate::graph::{Graph, Layout};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DrawingEdge {
    pub s: usize,
    pub t: usize,
    pub polyline: Vec<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bundled: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub control_points: Option<Vec<Point>>,
}

impl DrawingEdge {
    pub fn arc_length(&self) -> f64 {
        polyline_length(&self.polyline)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Drawing {
    pub directed: bool,
    pub vertices: Vec<Point>,
    pub edges: Vec<DrawingEdge>,
}

impl Drawing {
    /// The straight-line drawing of `g`: every polyline is its endpoint segment.
    pub fn straight(g: &Graph, layout: &Layout) -> Self {
        let edges = g
            .edges()
            .iter()
            .map(|e| DrawingEdge {
                s: e.source,
                t: e.target,
                polyline: vec![layout.position(e.source), layout.position(e.target)],
                bundled: None,
                control_points: None,
            })
            .collect();
        Drawing {
            directed: g.is_directed(),
            vertices: layout.positions().to_vec(),
            edges,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let d: Drawing = serde_json::from_str(text)?;
        d.validate()?;
        Ok(d)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn read(path: impl AsRef<std::path::Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<std::path::Path>) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    /// Checks ids, polyline sizes and coordinate finiteness.
    pub fn validate(&self) -> Result<()> {
        if let Some(vertex) = self.vertices.iter().position(|p| !p.is_finite()) {
            return Err(Error::NonFiniteCoordinate { vertex });
        }
        let n = self.vertices.len();
        for (i, e) in self.edges.iter().enumerate() {
            if e.s >= n || e.t >= n {
                return Err(Error::VertexOutOfRange {
                    source_id: e.s,
                    target: e.t,
                    vertex_count: n,
                });
            }
            if e.polyline.len() < 2 {
                return Err(Error::SchemaMismatch(format!(
                    "edge {i} polyline has fewer than 2 points"
                )));
            }
            if e.polyline.iter().any(|p| !p.is_finite()) {
                return Err(Error::SchemaMismatch(format!(
                    "edge {i} polyline has a non-finite point"
                )));
            }
        }
        Ok(())
    }

    /// Recovers the graph and layout the drawing was made from.
    pub fn graph(&self) -> Result<(Graph, Layout)> {
        let raw: Vec<_> = self.edges.iter().map(|e| (e.s, e.t)).collect();
        let g = Graph::new(self.vertices.len(), &raw, self.directed)?;
        Ok((g, Layout::new(self.vertices.clone())?))
    }

    /// Checks that edge `i` of the drawing is edge `i` of `g` (endpoint-set
    /// equality on undirected graphs).
    pub fn check_matches(&self, g: &Graph) -> Result<()> {
        if self.vertices.len() != g.vertex_count() {
            return Err(Error::SchemaMismatch(format!(
                "drawing has {} vertices, graph has {}",
                self.vertices.len(),
                g.vertex_count()
            )));
        }
        if self.edges.len() != g.edge_count() {
            return Err(Error::SchemaMismatch(format!(
                "drawing has {} edges, graph has {}",
                self.edges.len(),
                g.edge_count()
            )));
        }
        for (de, ge) in self.edges.iter().zip(g.edges()) {
            let same = (de.s == ge.source && de.t == ge.target)
                || (!g.is_directed() && de.s == ge.target && de.t == ge.source);
            if !same {
                return Err(Error::SchemaMismatch(format!(
                    "edge {} is ({}, {}) in the drawing but ({}, {}) in the graph",
                    ge.id, de.s, de.t, ge.source, ge.target
                )));
            }
        }
        Ok(())
    }

    /// Bounding box over vertices and every polyline point.
    pub fn bounding_box(&self) -> Option<BoundingBox> {
        BoundingBox::from_points(
            self.vertices
                .iter()
                .chain(self.edges.iter().flat_map(|e| e.polyline.iter())),
        )
    }

    /// Straight-line direction of edge `i` (source to target), in `[0, 2π)`.
    pub fn straight_direction(&self, i: usize) -> f64 {
        let e = &self.edges[i];
        self.vertices[e.s].direction_to(self.vertices[e.t])
    }
}
