//! Text formats: the edge-list graph format and trail sets.
//!
//! Edge list:
//!
//! ```text
//! undirected            # or `directed`
//! v <label> <x> <y>
//! e <source-label> <target-label>
//! ```
//!
//! Trail set: one trail per line, `x0 y0 x1 y1 ... xn yn`. Trail endpoints
//! are merged into vertices when closer than 1e-6 of the endpoint bounding
//! box diagonal, and each trail becomes the edge (first point, last point).

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::drawing::{Drawing, DrawingEdge};
use crate::error::{Error, Result};
use crate::geometry::{BoundingBox, Point};
use crate::graph::{DedupReport, Graph, Layout};

/// Relative merge tolerance for trail endpoints.
pub const TRAIL_MERGE_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    EdgeList,
    TrailSet,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "edge-list" => Ok(Format::EdgeList),
            "trail-set" => Ok(Format::TrailSet),
            other => Err(format!("unknown format `{other}`")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct LoadedGraph {
    pub graph: Graph,
    pub layout: Layout,
    /// External vertex labels, indexed by dense vertex id.
    pub labels: Vec<String>,
    pub report: DedupReport,
}

pub fn load_graph(path: impl AsRef<Path>, format: Format) -> Result<LoadedGraph> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    match format {
        Format::EdgeList => parse_edge_list(&text, path),
        Format::TrailSet => parse_trail_set(&text, path, false).map(|(g, _)| g),
    }
}

/// Loads a trail set as a pre-bundled drawing: trails keep their
/// intermediate points, with the first and last point snapped to the merged
/// vertex positions.
pub fn load_trail_drawing(path: impl AsRef<Path>, directed: bool) -> Result<(LoadedGraph, Drawing)> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let (loaded, trails) = parse_trail_set(&text, path, directed)?;
    let edges = loaded
        .graph
        .edges()
        .iter()
        .zip(trails)
        .map(|(e, mut polyline)| {
            let last = polyline.len() - 1;
            polyline[0] = loaded.layout.position(e.source);
            polyline[last] = loaded.layout.position(e.target);
            DrawingEdge {
                s: e.source,
                t: e.target,
                polyline,
                bundled: None,
                control_points: None,
            }
        })
        .collect();
    let drawing = Drawing {
        directed,
        vertices: loaded.layout.positions().to_vec(),
        edges,
    };
    Ok((loaded, drawing))
}

fn parse_error(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: PathBuf::from(path),
        line,
        message: message.into(),
    }
}

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

pub fn parse_edge_list(text: &str, path: &Path) -> Result<LoadedGraph> {
    let mut directed = None;
    let mut labels = Vec::new();
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut positions = Vec::new();
    let mut raw_edges: Vec<(String, String, usize)> = Vec::new();

    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = strip_comment(line);
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if directed.is_none() {
            directed = match tokens.as_slice() {
                ["directed"] => Some(true),
                ["undirected"] => Some(false),
                _ => {
                    return Err(parse_error(
                        path,
                        lineno,
                        "expected header `directed` or `undirected`",
                    ))
                }
            };
            continue;
        }
        match tokens.as_slice() {
            ["v", label, x, y] => {
                let parse = |s: &str| {
                    s.parse::<f64>()
                        .map_err(|_| parse_error(path, lineno, format!("bad coordinate `{s}`")))
                };
                let p = Point::new(parse(x)?, parse(y)?);
                if !p.is_finite() {
                    return Err(Error::NonFiniteCoordinate {
                        vertex: positions.len(),
                    });
                }
                if ids.insert(label.to_string(), positions.len()).is_some() {
                    return Err(parse_error(path, lineno, format!("vertex `{label}` declared twice")));
                }
                labels.push(label.to_string());
                positions.push(p);
            }
            ["e", s, t] => raw_edges.push((s.to_string(), t.to_string(), lineno)),
            _ => return Err(parse_error(path, lineno, format!("unrecognized line `{line}`"))),
        }
    }

    let directed = directed.ok_or_else(|| parse_error(path, 1, "empty file"))?;
    let mut edges = Vec::with_capacity(raw_edges.len());
    for (s, t, _) in &raw_edges {
        let lookup = |l: &String| {
            ids.get(l)
                .copied()
                .ok_or_else(|| Error::MissingCoordinates(l.clone()))
        };
        edges.push((lookup(s)?, lookup(t)?));
    }
    let (graph, report) = Graph::from_raw_edges(positions.len(), &edges, directed)?;
    Ok(LoadedGraph {
        graph,
        layout: Layout::new(positions)?,
        labels,
        report,
    })
}

fn parse_trail_set(text: &str, path: &Path, directed: bool) -> Result<(LoadedGraph, Vec<Vec<Point>>)> {
    let mut trails = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = strip_comment(line);
        if line.is_empty() {
            continue;
        }
        let values = line
            .split_whitespace()
            .map(|s| {
                s.parse::<f64>()
                    .map_err(|_| parse_error(path, lineno, format!("bad number `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        if values.len() < 4 || values.len() % 2 != 0 {
            return Err(parse_error(
                path,
                lineno,
                "a trail needs an even number of values and at least two points",
            ));
        }
        let points: Vec<Point> = values.chunks(2).map(|c| Point::new(c[0], c[1])).collect();
        if points.iter().any(|p| !p.is_finite()) {
            return Err(parse_error(path, lineno, "non-finite coordinate"));
        }
        trails.push(points);
    }

    let endpoints = trails
        .iter()
        .flat_map(|t| [t[0], *t.last().unwrap()])
        .collect::<Vec<_>>();
    let tol = BoundingBox::from_points(&endpoints)
        .map_or(0.0, |bb| bb.diagonal() * TRAIL_MERGE_TOLERANCE);
    let mut merger = EndpointMerger::new(tol);
    let mut raw = Vec::with_capacity(trails.len());
    for t in &trails {
        let a = merger.vertex_for(t[0]);
        let b = merger.vertex_for(*t.last().unwrap());
        raw.push((a, b));
    }

    let (graph, report) = Graph::from_raw_edges(merger.positions.len(), &raw, directed)?;
    // keep the trail of the first record of every surviving edge
    let mut kept = Vec::with_capacity(graph.edge_count());
    let mut next = 0;
    for (trail, &(a, b)) in trails.into_iter().zip(&raw) {
        if next < graph.edge_count() {
            let e = graph.edge(next);
            if e.source == a && e.target == b {
                kept.push(trail);
                next += 1;
            }
        }
    }
    let labels = (0..merger.positions.len()).map(|i| i.to_string()).collect();
    Ok((
        LoadedGraph {
            graph,
            layout: Layout::new(merger.positions)?,
            labels,
            report,
        },
        kept,
    ))
}

struct EndpointMerger {
    tol: f64,
    positions: Vec<Point>,
    buckets: HashMap<(i64, i64), Vec<usize>>,
}

impl EndpointMerger {
    fn new(tol: f64) -> Self {
        Self {
            tol,
            positions: Vec::new(),
            buckets: HashMap::new(),
        }
    }

    fn key(&self, p: Point) -> (i64, i64) {
        if self.tol > 0.0 {
            ((p.x / self.tol).floor() as i64, (p.y / self.tol).floor() as i64)
        } else {
            (0, 0)
        }
    }

    fn vertex_for(&mut self, p: Point) -> usize {
        let (kx, ky) = self.key(p);
        let mut best: Option<usize> = None;
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = self.buckets.get(&(kx + dx, ky + dy)) {
                    for &id in ids {
                        let close = if self.tol > 0.0 {
                            self.positions[id].distance(p) < self.tol
                        } else {
                            self.positions[id] == p
                        };
                        if close && best.is_none_or(|b| id < b) {
                            best = Some(id);
                        }
                    }
                }
            }
        }
        best.unwrap_or_else(|| {
            let id = self.positions.len();
            self.positions.push(p);
            self.buckets.entry((kx, ky)).or_default().push(id);
            id
        })
    }
}

/// Serializes a graph in the edge-list format. Coordinates use the shortest
/// round-trip representation, so reloading is exact.
pub fn write_edge_list(g: &Graph, layout: &Layout) -> String {
    let mut out = String::new();
    out.push_str(if g.is_directed() { "directed\n" } else { "undirected\n" });
    for (i, p) in layout.positions().iter().enumerate() {
        let _ = writeln!(out, "v {i} {:?} {:?}", p.x, p.y);
    }
    for e in g.edges() {
        let _ = writeln!(out, "e {} {}", e.source, e.target);
    }
    out
}
