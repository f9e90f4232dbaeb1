//! Shortest-path search used by the bundler.
//!
//! Labels are compared lexicographically on (summed weight, summed
//! geometric length), then by predecessor vertex and edge id, which makes
//! the returned path a deterministic function of the inputs.
//!
//! Early termination: a label is *doomed* when its geometric length plus
//! the straight-line distance to the target exceeds the budget. Edge
//! lengths are Euclidean, so that sum never decreases along an extension
//! and every descendant of a doomed label is doomed too. Once every queued
//! label is doomed the target's optimal label must be as well, and the
//! search stops with no path. Doomed vertices are still expanded while
//! live labels remain: skipping them could let a heavier but shorter path
//! win and change which path (if any) is accepted.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::geometry::Point;
use crate::graph::{EdgeId, Graph, Layout, VertexId};

/// The quantity the acceptance threshold is applied to.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Budget {
    /// Maximum summed Euclidean length of the path.
    Geometry(f64),
    /// Maximum summed edge weight of the path.
    Weight(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct PathResult {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
    pub weighted_cost: f64,
    pub geometric_length: f64,
}

#[derive(Clone, Copy, Debug)]
struct Entry {
    weight: f64,
    length: f64,
    vertex: VertexId,
    live: bool,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    // reversed: BinaryHeap is a max-heap
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .weight
            .total_cmp(&self.weight)
            .then_with(|| other.length.total_cmp(&self.length))
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

const NO_PRED: (usize, usize) = (usize::MAX, usize::MAX);
const DOOM_SLACK: f64 = 1e-9;

/// Reusable search workspace; repeated searches only touch the vertices
/// they reach.
#[derive(Debug, Default)]
pub struct PathSearch {
    weight: Vec<f64>,
    length: Vec<f64>,
    pred: Vec<(VertexId, EdgeId)>,
    settled: Vec<bool>,
    touched: Vec<VertexId>,
    heap: BinaryHeap<Entry>,
}

impl PathSearch {
    pub fn new(vertex_count: usize) -> Self {
        Self {
            weight: vec![f64::INFINITY; vertex_count],
            length: vec![f64::INFINITY; vertex_count],
            pred: vec![NO_PRED; vertex_count],
            settled: vec![false; vertex_count],
            touched: Vec::new(),
            heap: BinaryHeap::new(),
        }
    }

    fn reset(&mut self) {
        for &v in &self.touched {
            self.weight[v] = f64::INFINITY;
            self.length[v] = f64::INFINITY;
            self.pred[v] = NO_PRED;
            self.settled[v] = false;
        }
        self.touched.clear();
        self.heap.clear();
    }

    /// Minimum-weight `s -> t` path over edges not marked in `skip`,
    /// returned only if it fits `budget`.
    #[allow(clippy::too_many_arguments)]
    pub fn run(
        &mut self,
        g: &Graph,
        positions: &[Point],
        weights: &[f64],
        lengths: &[f64],
        skip: &[bool],
        s: VertexId,
        t: VertexId,
        budget: Budget,
    ) -> Option<PathResult> {
        if self.weight.len() < g.vertex_count() {
            *self = PathSearch::new(g.vertex_count());
        }
        self.reset();

        let target = positions[t];
        let doomed = |w: f64, len: f64, v: VertexId| match budget {
            Budget::Geometry(b) => len + positions[v].distance(target) > b * (1.0 + DOOM_SLACK),
            Budget::Weight(b) => w > b,
        };
        let over = |w: f64, len: f64| match budget {
            Budget::Geometry(b) => len > b,
            Budget::Weight(b) => w > b,
        };

        self.weight[s] = 0.0;
        self.length[s] = 0.0;
        self.touched.push(s);
        let live = !doomed(0.0, 0.0, s);
        self.heap.push(Entry {
            weight: 0.0,
            length: 0.0,
            vertex: s,
            live,
        });
        let mut live_count = usize::from(live);

        while let Some(entry) = self.heap.pop() {
            if entry.live {
                live_count -= 1;
            }
            let u = entry.vertex;
            if self.settled[u]
                || entry.weight != self.weight[u]
                || entry.length != self.length[u]
            {
                continue;
            }
            self.settled[u] = true;
            if u == t {
                if over(self.weight[t], self.length[t]) {
                    return None;
                }
                return Some(self.path_to(s, t));
            }
            if live_count == 0 && !entry.live {
                return None;
            }

            let (wu, lu) = (self.weight[u], self.length[u]);
            for arc in g.arcs(u) {
                if skip[arc.edge] || self.settled[arc.to] {
                    continue;
                }
                let x = arc.to;
                let nw = wu + weights[arc.edge];
                let nl = lu + lengths[arc.edge];
                let order = nw
                    .total_cmp(&self.weight[x])
                    .then_with(|| nl.total_cmp(&self.length[x]));
                match order {
                    Ordering::Less => {
                        if self.weight[x].is_infinite() && self.pred[x] == NO_PRED {
                            self.touched.push(x);
                        }
                        self.weight[x] = nw;
                        self.length[x] = nl;
                        self.pred[x] = (u, arc.edge);
                        let live = !doomed(nw, nl, x);
                        live_count += usize::from(live);
                        self.heap.push(Entry {
                            weight: nw,
                            length: nl,
                            vertex: x,
                            live,
                        });
                    }
                    Ordering::Equal if (u, arc.edge) < self.pred[x] => {
                        self.pred[x] = (u, arc.edge);
                    }
                    _ => {}
                }
            }
        }
        None
    }

    fn path_to(&self, s: VertexId, t: VertexId) -> PathResult {
        let mut vertices = vec![t];
        let mut edges = Vec::new();
        let mut v = t;
        while v != s {
            let (p, e) = self.pred[v];
            edges.push(e);
            vertices.push(p);
            v = p;
        }
        vertices.reverse();
        edges.reverse();
        PathResult {
            vertices,
            edges,
            weighted_cost: self.weight[t],
            geometric_length: self.length[t],
        }
    }
}

/// Minimum-weight path from `s` to `t` avoiding skipped edges, or `None`
/// when no path exists or the optimal one is longer than `geometric_budget`.
pub fn constrained_dijkstra(
    g: &Graph,
    layout: &Layout,
    weights: &[f64],
    skip: &[bool],
    s: VertexId,
    t: VertexId,
    geometric_budget: f64,
) -> Option<PathResult> {
    let lengths: Vec<f64> = g.edges().iter().map(|e| layout.euclidean_length(e)).collect();
    PathSearch::new(g.vertex_count()).run(
        g,
        layout.positions(),
        weights,
        &lengths,
        skip,
        s,
        t,
        Budget::Geometry(geometric_budget),
    )
}
