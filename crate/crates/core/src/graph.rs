//! Graph topology, vertex layout and the basic queries shared by the
//! bundler and the metrics.

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::geometry::{BoundingBox, Point};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: EdgeId,
    pub source: VertexId,
    pub target: VertexId,
}

impl Edge {
    /// The endpoint opposite to `v`.
    pub fn other(&self, v: VertexId) -> VertexId {
        if v == self.source {
            self.target
        } else {
            self.source
        }
    }
}

/// One adjacency entry: the vertex reached and the edge used.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Arc {
    pub to: VertexId,
    pub edge: EdgeId,
}

/// Counts of records dropped while building a graph from raw edges.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DedupReport {
    pub self_loops: usize,
    pub duplicates: usize,
}

/// Immutable graph. Edge ids are list indices.
#[derive(Clone, Debug)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<Edge>,
    directed: bool,
    // forward arcs respect direction; `both` ignores it
    forward: Vec<Vec<Arc>>,
    both: Vec<Vec<Arc>>,
}

impl Graph {
    /// Builds a graph, rejecting out-of-range ids, self-loops and duplicate edges.
    pub fn new(vertex_count: usize, edges: &[(VertexId, VertexId)], directed: bool) -> Result<Self> {
        let (g, report) = Self::from_raw_edges(vertex_count, edges, directed)?;
        if report.self_loops > 0 {
            let e = edges.iter().find(|(s, t)| s == t).unwrap();
            return Err(Error::SelfLoop(e.0));
        }
        if report.duplicates > 0 {
            return Err(Error::InvalidParameter(format!(
                "{} duplicate edge(s)",
                report.duplicates
            )));
        }
        Ok(g)
    }

    /// Builds a graph, silently dropping self-loops and duplicates (an
    /// undirected duplicate is `(a,b)` after `(b,a)`), and reports the counts.
    pub fn from_raw_edges(
        vertex_count: usize,
        raw: &[(VertexId, VertexId)],
        directed: bool,
    ) -> Result<(Self, DedupReport)> {
        let mut report = DedupReport::default();
        let mut seen = HashSet::with_capacity(raw.len());
        let mut edges = Vec::with_capacity(raw.len());
        for &(s, t) in raw {
            if s >= vertex_count || t >= vertex_count {
                return Err(Error::VertexOutOfRange {
                    source_id: s,
                    target: t,
                    vertex_count,
                });
            }
            if s == t {
                report.self_loops += 1;
                continue;
            }
            let key = if directed { (s, t) } else { (s.min(t), s.max(t)) };
            if !seen.insert(key) {
                report.duplicates += 1;
                continue;
            }
            edges.push(Edge {
                id: edges.len(),
                source: s,
                target: t,
            });
        }

        let mut forward = vec![Vec::new(); vertex_count];
        let mut both = vec![Vec::new(); vertex_count];
        for e in &edges {
            forward[e.source].push(Arc {
                to: e.target,
                edge: e.id,
            });
            if !directed {
                forward[e.target].push(Arc {
                    to: e.source,
                    edge: e.id,
                });
            }
            both[e.source].push(Arc {
                to: e.target,
                edge: e.id,
            });
            both[e.target].push(Arc {
                to: e.source,
                edge: e.id,
            });
        }

        Ok((
            Graph {
                vertex_count,
                edges,
                directed,
                forward,
                both,
            },
            report,
        ))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Edge {
        self.edges[id]
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Arcs leaving `v`; on directed graphs only out-edges.
    pub fn arcs(&self, v: VertexId) -> &[Arc] {
        &self.forward[v]
    }

    /// Arcs incident to `v` regardless of direction.
    pub fn undirected_arcs(&self, v: VertexId) -> &[Arc] {
        &self.both[v]
    }

    /// Same topology with the directedness flag changed. Switching a directed
    /// graph to undirected collapses antiparallel pairs.
    pub fn with_directed(&self, directed: bool) -> (Graph, DedupReport) {
        let raw: Vec<_> = self.edges.iter().map(|e| (e.source, e.target)).collect();
        Graph::from_raw_edges(self.vertex_count, &raw, directed).expect("ids already validated")
    }

    /// Whether `u -> v` is an edge (either orientation when undirected).
    pub fn has_arc(&self, u: VertexId, v: VertexId) -> bool {
        self.forward[u].iter().any(|a| a.to == v)
    }

    /// Hop distance from `s` to `v` respecting direction, or `None` when
    /// unreachable within `cap` hops.
    pub fn hop_distance(&self, s: VertexId, v: VertexId, cap: usize) -> Option<usize> {
        bounded_bfs(&self.forward, s, Some(v), cap).1
    }

    /// Hop distance ignoring edge direction.
    pub fn undirected_hop_distance(&self, s: VertexId, v: VertexId, cap: usize) -> Option<usize> {
        bounded_bfs(&self.both, s, Some(v), cap).1
    }

    /// All vertices within `cap` undirected hops of `s`, with their distance.
    pub fn undirected_ball(&self, s: VertexId, cap: usize) -> Vec<(VertexId, usize)> {
        bounded_bfs(&self.both, s, None, cap).0
    }

    /// Weakly connected components; ids are dense and numbered in order of
    /// each component's smallest vertex.
    pub fn connected_components(&self) -> Vec<usize> {
        const NONE: usize = usize::MAX;
        let mut comp = vec![NONE; self.vertex_count];
        let mut next = 0;
        let mut queue = VecDeque::new();
        for start in 0..self.vertex_count {
            if comp[start] != NONE {
                continue;
            }
            comp[start] = next;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                for a in &self.both[u] {
                    if comp[a.to] == NONE {
                        comp[a.to] = next;
                        queue.push_back(a.to);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn component_count(&self) -> usize {
        self.connected_components()
            .into_iter()
            .max()
            .map_or(0, |m| m + 1)
    }
}

fn bounded_bfs(
    adj: &[Vec<Arc>],
    s: VertexId,
    goal: Option<VertexId>,
    cap: usize,
) -> (Vec<(VertexId, usize)>, Option<usize>) {
    if goal == Some(s) {
        return (vec![(s, 0)], Some(0));
    }
    let mut dist = std::collections::HashMap::new();
    dist.insert(s, 0usize);
    let mut order = vec![(s, 0)];
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        let du = dist[&u];
        if du >= cap {
            continue;
        }
        for a in &adj[u] {
            if dist.contains_key(&a.to) {
                continue;
            }
            dist.insert(a.to, du + 1);
            if goal == Some(a.to) {
                return (order, Some(du + 1));
            }
            order.push((a.to, du + 1));
            queue.push_back(a.to);
        }
    }
    (order, None)
}

/// Vertex positions of a drawing, one per vertex, all finite.
#[derive(Clone, Debug, PartialEq)]
pub struct Layout {
    positions: Vec<Point>,
}

impl Layout {
    pub fn new(positions: Vec<Point>) -> Result<Self> {
        if let Some(vertex) = positions.iter().position(|p| !p.is_finite()) {
            return Err(Error::NonFiniteCoordinate { vertex });
        }
        Ok(Self { positions })
    }

    pub fn position(&self, v: VertexId) -> Point {
        self.positions[v]
    }

    pub fn positions(&self) -> &[Point] {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn bounding_box(&self) -> Option<BoundingBox> {
        BoundingBox::from_points(&self.positions)
    }

    pub fn check_covers(&self, g: &Graph) -> Result<()> {
        if self.positions.len() != g.vertex_count() {
            return Err(Error::LayoutMismatch {
                graph: g.vertex_count(),
                layout: self.positions.len(),
            });
        }
        Ok(())
    }

    /// Straight-line length of `e` in this layout.
    pub fn euclidean_length(&self, e: &Edge) -> f64 {
        self.positions[e.source].distance(self.positions[e.target])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::new(3, &[(0, 1), (1, 2)], false).unwrap()
    }

    #[test]
    fn euclidean_length_cases() {
        let l = Layout::new(vec![
            Point::new(0.0, 0.0),
            Point::new(3.0, 4.0),
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
        ])
        .unwrap();
        let e = |s, t| Edge {
            id: 0,
            source: s,
            target: t,
        };
        assert_eq!(l.euclidean_length(&e(0, 1)), 5.0);
        assert_eq!(l.euclidean_length(&e(0, 2)), 0.0);
        assert_eq!(l.euclidean_length(&e(0, 3)), 1.0);
    }

    #[test]
    fn hop_distance_cases() {
        let g = path3();
        assert_eq!(g.hop_distance(0, 2, 5), Some(2));
        assert_eq!(g.hop_distance(1, 1, 5), Some(0));
        assert_eq!(g.hop_distance(0, 2, 1), None);
        let two = Graph::new(4, &[(0, 1), (2, 3)], false).unwrap();
        assert_eq!(two.hop_distance(0, 3, 10), None);
    }

    #[test]
    fn directed_hops_respect_direction() {
        let g = Graph::new(3, &[(0, 1), (1, 2)], true).unwrap();
        assert_eq!(g.hop_distance(0, 2, 5), Some(2));
        assert_eq!(g.hop_distance(2, 0, 5), None);
        assert_eq!(g.undirected_hop_distance(2, 0, 5), Some(2));
    }

    #[test]
    fn dedup_and_self_loops() {
        let (g, r) = Graph::from_raw_edges(3, &[(0, 1), (1, 0), (2, 2), (1, 2)], false).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(r, DedupReport { self_loops: 1, duplicates: 1 });

        let (d, r) = Graph::from_raw_edges(2, &[(0, 1), (1, 0), (0, 1)], true).unwrap();
        assert_eq!(d.edge_count(), 2);
        assert_eq!(r.duplicates, 1);
        assert!(Graph::new(2, &[(0, 5)], false).is_err());
        assert!(Graph::new(2, &[(1, 1)], false).is_err());
    }

    #[test]
    fn components() {
        assert_eq!(Graph::new(2, &[(0, 1)], false).unwrap().component_count(), 1);
        let g = Graph::new(5, &[(3, 4), (0, 1)], true).unwrap();
        assert_eq!(g.connected_components(), vec![0, 0, 1, 2, 2]);
        assert_eq!(Graph::new(0, &[], false).unwrap().component_count(), 0);
    }

    #[test]
    fn non_finite_layout_rejected() {
        assert!(Layout::new(vec![Point::new(f64::NAN, 0.0)]).is_err());
        assert!(Layout::new(vec![Point::new(0.0, f64::INFINITY)]).is_err());
    }
}
