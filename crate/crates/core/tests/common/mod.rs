//! Shared fixtures and reference implementations for the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use edgepath::bundling::ThresholdMode;
use edgepath::metrics::{AmbiguityConfig, Frame, Orientation};
use edgepath::{BundlingParams, Drawing, DrawingEdge, Graph, Layout, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random graph with uniform positions in the unit square and independent
/// edges of probability `p`; a quarter of the instances are directed.
pub fn random_graph(seed: u64, max_vertices: usize) -> (Graph, Layout) {
    let mut r = rng(seed);
    let n = r.random_range(2..=max_vertices);
    let p = r.random_range(0.1..0.6);
    let directed = r.random_bool(0.25);
    let positions = (0..n).map(|_| Point::new(r.random(), r.random())).collect();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if r.random_bool(p) {
                edges.push(if directed && r.random_bool(0.5) { (b, a) } else { (a, b) });
            }
        }
    }
    (Graph::new(n, &edges, directed).unwrap(), Layout::new(positions).unwrap())
}

/// Random undirected graph with about `n` edges, so that it usually has
/// several components.
pub fn sparse_random_graph(seed: u64, max_vertices: usize) -> (Graph, Layout) {
    let mut r = rng(seed);
    let n = r.random_range(2..=max_vertices);
    let target = r.random_range(0..=n);
    let positions = (0..n).map(|_| Point::new(r.random(), r.random())).collect();
    let mut edges = Vec::new();
    for _ in 0..target {
        let (a, b) = (r.random_range(0..n), r.random_range(0..n));
        if a != b && !edges.contains(&(a, b)) && !edges.contains(&(b, a)) {
            edges.push((a, b));
        }
    }
    (Graph::new(n, &edges, false).unwrap(), Layout::new(positions).unwrap())
}

fn lex_less(a: (f64, f64), b: (f64, f64)) -> bool {
    a.0 < b.0 || (a.0 == b.0 && a.1 < b.1)
}

/// Minimum (weight, length) path by Bellman-Ford relaxation, without any
/// budget pruning. Ties go to the smallest (predecessor, edge id).
pub fn bellman_ford_path(
    g: &Graph,
    weights: &[f64],
    lengths: &[f64],
    skip: &[bool],
    s: usize,
    t: usize,
) -> Option<(Vec<usize>, Vec<usize>, f64, f64)> {
    let n = g.vertex_count();
    let mut dist = vec![(f64::INFINITY, f64::INFINITY); n];
    dist[s] = (0.0, 0.0);
    let arcs: Vec<(usize, usize, usize)> = g
        .edges()
        .iter()
        .filter(|e| !skip[e.id])
        .flat_map(|e| {
            let fwd = (e.source, e.target, e.id);
            let back = (e.target, e.source, e.id);
            if g.is_directed() {
                vec![fwd]
            } else {
                vec![fwd, back]
            }
        })
        .collect();
    loop {
        let mut changed = false;
        for &(u, x, e) in &arcs {
            if dist[u].0.is_infinite() {
                continue;
            }
            let cand = (dist[u].0 + weights[e], dist[u].1 + lengths[e]);
            if lex_less(cand, dist[x]) {
                dist[x] = cand;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    if dist[t].0.is_infinite() {
        return None;
    }
    let mut pred = vec![(usize::MAX, usize::MAX); n];
    for &(u, x, e) in &arcs {
        if x == s || dist[u].0.is_infinite() {
            continue;
        }
        let cand = (dist[u].0 + weights[e], dist[u].1 + lengths[e]);
        if cand == dist[x] && (u, e) < pred[x] {
            pred[x] = (u, e);
        }
    }
    let mut vertices = vec![t];
    let mut edges = Vec::new();
    let mut v = t;
    while v != s {
        let (p, e) = pred[v];
        vertices.push(p);
        edges.push(e);
        v = p;
    }
    vertices.reverse();
    edges.reverse();
    Some((vertices, edges, dist[t].0, dist[t].1))
}

/// Edge-path bundling driven by the unpruned oracle search. Returns the
/// vertex path of every bundled edge.
pub fn oracle_bundle(g: &Graph, layout: &Layout, params: &BundlingParams) -> Vec<Option<Vec<usize>>> {
    let m = g.edge_count();
    let lengths: Vec<f64> = g.edges().iter().map(|e| layout.euclidean_length(e)).collect();
    let weights: Vec<f64> = lengths.iter().map(|l| l.powf(params.weight_exponent)).collect();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]).then(a.cmp(&b)));
    let mut lock = vec![false; m];
    let mut skip = vec![false; m];
    let mut paths = vec![None; m];
    for e in order {
        if lock[e] || lengths[e] == 0.0 {
            continue;
        }
        skip[e] = true;
        let edge = g.edge(e);
        let found = bellman_ford_path(g, &weights, &lengths, &skip, edge.source, edge.target);
        let accepted = found.filter(|(_, _, w, l)| match params.threshold {
            ThresholdMode::Geometry => *l <= params.max_distortion * lengths[e],
            ThresholdMode::Weight => *w <= params.max_distortion * weights[e],
        });
        match accepted {
            None => skip[e] = false,
            Some((vertices, edges, _, _)) => {
                for x in edges {
                    lock[x] = true;
                }
                paths[e] = Some(vertices);
            }
        }
    }
    paths
}

/// Liang-Barsky test: does segment `a -> b` meet the closed box?
fn segment_meets_box(a: Point, b: Point, min: Point, max: Point) -> bool {
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    let d = b - a;
    for (p, q) in [
        (-d.x, a.x - min.x),
        (d.x, max.x - a.x),
        (-d.y, a.y - min.y),
        (d.y, max.y - a.y),
    ] {
        if p == 0.0 {
            if q < 0.0 {
                return false;
            }
        } else {
            let r = q / p;
            if p < 0.0 {
                t0 = t0.max(r);
            } else {
                t1 = t1.min(r);
            }
        }
    }
    t0 <= t1
}

#[derive(Clone, Debug, PartialEq)]
pub struct OraclePair {
    pub a: usize,
    pub b: usize,
    pub window: (usize, usize),
    pub orientation: Orientation,
}

fn acute(a: f64, b: f64) -> f64 {
    let d = (a - b).abs() % PI;
    d.min(PI - d)
}

fn mean_angle(angles: &[f64]) -> f64 {
    let (s, c) = angles
        .iter()
        .fold((0.0, 0.0), |(s, c), a| (s + a.sin(), c + a.cos()));
    s.atan2(c).rem_euclid(TAU)
}

/// Ambiguous pairs by comparing every edge pair in every window directly,
/// with cell membership from exact segment/box clipping. Also returns the
/// per-window-centre pair counts.
pub fn brute_force_pairs(
    drawing: &Drawing,
    frame: &Frame,
    config: &AmbiguityConfig,
) -> (Vec<OraclePair>, Vec<u32>) {
    let cs = config.cell_px as f64;
    let cols = frame.width.div_ceil(config.cell_px);
    let rows = frame.height.div_ceil(config.cell_px);
    // cell angle of each edge: cells[(edge, row, col)]
    let mut cell_angle: BTreeMap<(usize, usize, usize), f64> = BTreeMap::new();
    for (i, e) in drawing.edges.iter().enumerate() {
        let mut per_cell: BTreeMap<(usize, usize), Vec<f64>> = BTreeMap::new();
        for w in e.polyline.windows(2) {
            if w[0] == w[1] {
                continue;
            }
            let dir = (w[1].y - w[0].y).atan2(w[1].x - w[0].x);
            let (a, b) = (frame.to_pixel(w[0]), frame.to_pixel(w[1]));
            for r in 0..rows {
                for c in 0..cols {
                    let min = Point::new(c as f64 * cs, r as f64 * cs);
                    let max = Point::new(min.x + cs, min.y + cs);
                    if segment_meets_box(a, b, min, max) {
                        per_cell.entry((r, c)).or_default().push(dir);
                    }
                }
            }
        }
        for ((r, c), dirs) in per_cell {
            cell_angle.insert((i, r, c), mean_angle(&dirs));
        }
    }

    let w = config.effective_window();
    let theta = config.theta();
    let mut found: Vec<OraclePair> = Vec::new();
    let mut counts = vec![0u32; cols * rows];
    for r0 in 0..=rows.saturating_sub(w) {
        for c0 in 0..=cols.saturating_sub(w) {
            let mut dirs: Vec<(usize, f64)> = Vec::new();
            for i in 0..drawing.edges.len() {
                let mut angles = Vec::new();
                for r in r0..(r0 + w).min(rows) {
                    for c in c0..(c0 + w).min(cols) {
                        if let Some(&a) = cell_angle.get(&(i, r, c)) {
                            angles.push(a);
                        }
                    }
                }
                if !angles.is_empty() {
                    dirs.push((i, mean_angle(&angles)));
                }
            }
            let mut here = 0;
            for x in 0..dirs.len() {
                for y in x + 1..dirs.len() {
                    let ((a, da), (b, db)) = (dirs[x], dirs[y]);
                    if acute(da, db) >= theta {
                        continue;
                    }
                    here += 1;
                    if !found.iter().any(|p| p.a == a && p.b == b) {
                        let diff = (da - db).abs() % TAU;
                        let orientation = if diff.min(TAU - diff) < FRAC_PI_2 {
                            Orientation::Aligned
                        } else {
                            Orientation::AntiAligned
                        };
                        found.push(OraclePair {
                            a,
                            b,
                            window: (c0, r0),
                            orientation,
                        });
                    }
                }
            }
            if here > 0 {
                let centre = ((r0 + w / 2).min(rows - 1), (c0 + w / 2).min(cols - 1));
                counts[centre.0 * cols + centre.1] += here;
            }
        }
    }
    found.sort_by_key(|p| (p.a, p.b));
    (found, counts)
}

/// Up to `max_edges` edges, most of them near-parallel strokes through a
/// small area, some bent into polylines.
pub fn random_drawing(seed: u64, max_edges: usize) -> Drawing {
    let mut r = rng(seed);
    let m = r.random_range(1..=max_edges);
    let base: f64 = r.random_range(0.0..TAU);
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    for _ in 0..m {
        let angle = if r.random_bool(0.7) {
            base + r.random_range(-0.15..0.15) + if r.random_bool(0.3) { PI } else { 0.0 }
        } else {
            r.random_range(0.0..TAU)
        };
        let centre = Point::new(r.random_range(0.3..0.7), r.random_range(0.3..0.7));
        let half = r.random_range(0.1..0.4);
        let d = Point::new(angle.cos() * half, angle.sin() * half);
        let (a, b) = (centre - d, centre + d);
        let s = vertices.len();
        vertices.push(a);
        vertices.push(b);
        let mut polyline = vec![a];
        let bends = r.random_range(0..3);
        for k in 1..=bends {
            let t = k as f64 / (bends + 1) as f64;
            let p = a + (b - a) * t;
            polyline.push(Point::new(p.x + r.random_range(-0.03..0.03), p.y + r.random_range(-0.03..0.03)));
        }
        polyline.push(b);
        edges.push(DrawingEdge {
            s,
            t: s + 1,
            polyline,
            bundled: None,
            control_points: None,
        });
    }
    Drawing {
        directed: false,
        vertices,
        edges,
    }
}
