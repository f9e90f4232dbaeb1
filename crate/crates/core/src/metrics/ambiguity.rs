//! Ambiguity: which endpoints a viewer could confuse because two edges run
//! close together at a shallow angle, and how many of those confusions
//! are false (farther than `δ` hops apart in the graph).
//!
//! Detection works on a square grid laid over the pixel frame. Every cell
//! records, per edge crossing it, the circular mean direction of that
//! edge's segments in the cell. A sliding window of `window_cells²` cells
//! aggregates each edge's direction over the window and compares all edge
//! pairs present in it.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::raster::Frame;
use crate::drawing::Drawing;
use crate::error::{Error, Result};
use crate::geometry::{normalize_angle, Point};
use crate::graph::{EdgeId, Graph, VertexId};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AmbiguityConfig {
    /// Crossing angle below which two edges are confusable, in degrees.
    pub angle_threshold_deg: f64,
    /// Proximity threshold in pixels. `None` means one grid cell, i.e. the
    /// configured window; otherwise the window spans `eps` on each side.
    pub proximity_epsilon_px: Option<f64>,
    pub cell_px: usize,
    pub window_cells: usize,
    pub delta_range: Vec<usize>,
    /// Windows holding more edges than this only compare the lowest ids.
    pub max_edges_per_window: usize,
}

impl Default for AmbiguityConfig {
    fn default() -> Self {
        Self {
            angle_threshold_deg: 7.5,
            proximity_epsilon_px: None,
            cell_px: 8,
            window_cells: 3,
            delta_range: (1..=5).collect(),
            max_edges_per_window: 512,
        }
    }
}

impl AmbiguityConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.into()));
        if !(self.angle_threshold_deg > 0.0 && self.angle_threshold_deg < 90.0) {
            return bad("theta must lie strictly between 0 and 90 degrees");
        }
        if self.cell_px == 0 {
            return bad("grid cell size must be positive");
        }
        if self.window_cells == 0 || self.window_cells.is_multiple_of(2) {
            return bad("window size must be a positive odd number of cells");
        }
        if let Some(eps) = self.proximity_epsilon_px {
            if eps.is_nan() || eps <= 0.0 {
                return bad("epsilon must be positive");
            }
        }
        if self.delta_range.is_empty() || self.delta_range.contains(&0) {
            return bad("delta range must be non-empty and start at 1 or more");
        }
        if self.max_edges_per_window < 2 {
            return bad("edges per window must be at least 2");
        }
        Ok(())
    }

    /// Window side in cells after applying the proximity threshold.
    pub fn effective_window(&self) -> usize {
        match self.proximity_epsilon_px {
            Some(eps) => 2 * (eps / self.cell_px as f64).ceil() as usize + 1,
            None => self.window_cells,
        }
    }

    pub fn theta(&self) -> f64 {
        self.angle_threshold_deg.to_radians()
    }
}

/// One edge's presence in one cell.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CellEntry {
    pub edge: EdgeId,
    /// Circular mean direction in `[0, 2π)`.
    pub angle: f64,
    pub segments: u32,
}

#[derive(Clone, Debug)]
pub struct AmbiguityGrid {
    pub cols: usize,
    pub rows: usize,
    pub cell_px: usize,
    /// Row-major; each cell sorted by edge id.
    pub cells: Vec<Vec<CellEntry>>,
}

impl AmbiguityGrid {
    pub fn cell(&self, col: usize, row: usize) -> &[CellEntry] {
        &self.cells[row * self.cols + col]
    }
}

/// Cells whose half-open pixel box contains part of the segment `a -> b`
/// (pixel coordinates), clamped to the grid.
pub fn segment_cells(a: Point, b: Point, cell_px: usize, cols: usize, rows: usize) -> Vec<(usize, usize)> {
    let cs = cell_px as f64;
    let (a, b) = (Point::new(a.x / cs, a.y / cs), Point::new(b.x / cs, b.y / cs));
    let clamp_c = |v: f64| (v.floor().max(0.0) as usize).min(cols - 1);
    let clamp_r = |v: f64| (v.floor().max(0.0) as usize).min(rows - 1);
    let mut out = Vec::new();
    let (x0, x1) = (a.x.min(b.x), a.x.max(b.x));
    let dx = b.x - a.x;
    let first = x0.floor() as i64;
    let last = x1.floor() as i64;
    for col in first..=last {
        // part of the segment inside this column strip
        let (ys, ye) = if dx == 0.0 {
            (a.y, b.y)
        } else {
            let lo = (col as f64).max(x0);
            let hi = ((col + 1) as f64).min(x1);
            let ta = (lo - a.x) / dx;
            let tb = (hi - a.x) / dx;
            (a.y + ta * (b.y - a.y), a.y + tb * (b.y - a.y))
        };
        let r0 = ys.min(ye).floor() as i64;
        let r1 = ys.max(ye).floor() as i64;
        let c = clamp_c(col as f64);
        for row in r0..=r1 {
            let cell = (c, clamp_r(row as f64));
            if out.last() != Some(&cell) {
                out.push(cell);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Assigns every edge's segments to grid cells, walking polylines from
/// source to target.
pub fn build_ambiguity_grid(drawing: &Drawing, frame: &Frame, config: &AmbiguityConfig) -> AmbiguityGrid {
    let cols = frame.width.div_ceil(config.cell_px).max(1);
    let rows = frame.height.div_ceil(config.cell_px).max(1);

    let per_edge: Vec<Vec<(usize, f64, f64, u32)>> = drawing
        .edges
        .par_iter()
        .map(|e| {
            let mut acc: BTreeMap<usize, (f64, f64, u32)> = BTreeMap::new();
            for w in e.polyline.windows(2) {
                if w[0] == w[1] {
                    continue;
                }
                let angle = w[0].direction_to(w[1]);
                let (s, c) = angle.sin_cos();
                let a = frame.to_pixel(w[0]);
                let b = frame.to_pixel(w[1]);
                for (col, row) in segment_cells(a, b, config.cell_px, cols, rows) {
                    let slot = acc.entry(row * cols + col).or_insert((0.0, 0.0, 0));
                    slot.0 += c;
                    slot.1 += s;
                    slot.2 += 1;
                }
            }
            acc.into_iter().map(|(i, (c, s, n))| (i, c, s, n)).collect()
        })
        .collect();

    let mut cells = vec![Vec::new(); cols * rows];
    for (edge, entries) in per_edge.into_iter().enumerate() {
        for (i, c, s, n) in entries {
            cells[i].push(CellEntry {
                edge,
                angle: normalize_angle(s.atan2(c)),
                segments: n,
            });
        }
    }
    AmbiguityGrid {
        cols,
        rows,
        cell_px: config.cell_px,
        cells,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    /// Directed angle difference below 90°: source near source.
    Aligned,
    /// Source of one edge near the target of the other.
    AntiAligned,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AmbiguousPair {
    /// Smaller edge id first.
    pub a: EdgeId,
    pub b: EdgeId,
    /// Top-left cell (col, row) of the first window that detected the pair.
    pub window: (usize, usize),
    pub orientation: Orientation,
}

/// Smaller angle between the undirected lines at directions `a` and `b`.
pub fn acute_angle(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(PI);
    d.min(PI - d)
}

/// Angle between directed directions `a` and `b`, in `[0, π]`.
pub fn directed_difference(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

pub fn orientation_of(a: f64, b: f64) -> Orientation {
    if directed_difference(a, b) < FRAC_PI_2 {
        Orientation::Aligned
    } else {
        Orientation::AntiAligned
    }
}

#[derive(Clone, Debug)]
pub struct PairDetection {
    /// Sorted by `(a, b)`.
    pub pairs: Vec<AmbiguousPair>,
    /// Ambiguous pairs found in the window centred on each cell, row-major.
    pub cell_counts: Vec<u32>,
    pub cols: usize,
    pub rows: usize,
    /// Windows whose edge list was truncated to `max_edges_per_window`.
    pub truncated_windows: usize,
}

// window index, edge pair, orientation
type WindowPair = (usize, (EdgeId, EdgeId), Orientation);
// pairs found in one row of windows, plus (window, pair count)
type WindowRow = (Vec<WindowPair>, Vec<(usize, u32)>);

/// Slides the window over the grid and reports every edge pair whose
/// window-aggregated directions are within the angle threshold.
pub fn detect_ambiguous_pairs(grid: &AmbiguityGrid, config: &AmbiguityConfig) -> PairDetection {
    let w = config.effective_window();
    let theta = config.theta();
    let win_cols = grid.cols.saturating_sub(w) + 1;
    let win_rows = grid.rows.saturating_sub(w) + 1;
    let truncated = AtomicUsize::new(0);

    let rows: Vec<WindowRow> = (0..win_rows)
        .into_par_iter()
        .map(|r0| {
            let mut found = Vec::new();
            let mut seen: HashMap<(EdgeId, EdgeId), ()> = HashMap::new();
            let mut counts = Vec::new();
            let mut agg: Vec<(EdgeId, f64, f64)> = Vec::new();
            for c0 in 0..win_cols {
                agg.clear();
                for r in r0..(r0 + w).min(grid.rows) {
                    for c in c0..(c0 + w).min(grid.cols) {
                        for ce in grid.cell(c, r) {
                            let (s, co) = ce.angle.sin_cos();
                            agg.push((ce.edge, co, s));
                        }
                    }
                }
                if agg.len() < 2 {
                    continue;
                }
                agg.sort_by_key(|x| x.0);
                let mut edges: Vec<(EdgeId, f64)> = Vec::new();
                let mut i = 0;
                while i < agg.len() {
                    let id = agg[i].0;
                    let (mut c, mut s) = (0.0, 0.0);
                    while i < agg.len() && agg[i].0 == id {
                        c += agg[i].1;
                        s += agg[i].2;
                        i += 1;
                    }
                    edges.push((id, normalize_angle(s.atan2(c))));
                }
                if edges.len() > config.max_edges_per_window {
                    edges.truncate(config.max_edges_per_window);
                    truncated.fetch_add(1, Ordering::Relaxed);
                }
                let window_pairs = close_pairs(&edges, theta);
                if window_pairs.is_empty() {
                    continue;
                }
                let centre_row = (r0 + w / 2).min(grid.rows - 1);
                let centre_col = (c0 + w / 2).min(grid.cols - 1);
                counts.push((centre_row * grid.cols + centre_col, window_pairs.len() as u32));
                for (x, y) in window_pairs {
                    let (ea, aa) = edges[x];
                    let (eb, ab) = edges[y];
                    let key = (ea.min(eb), ea.max(eb));
                    if seen.insert(key, ()).is_none() {
                        found.push((c0, key, orientation_of(aa, ab)));
                    }
                }
            }
            (found, counts)
        })
        .collect();

    let mut pairs: HashMap<(EdgeId, EdgeId), AmbiguousPair> = HashMap::new();
    let mut cell_counts = vec![0u32; grid.cols * grid.rows];
    for (r0, (found, counts)) in rows.into_iter().enumerate() {
        for (c0, (a, b), orientation) in found {
            pairs.entry((a, b)).or_insert(AmbiguousPair {
                a,
                b,
                window: (c0, r0),
                orientation,
            });
        }
        for (cell, n) in counts {
            cell_counts[cell] += n;
        }
    }
    let truncated_windows = truncated.into_inner();
    if truncated_windows > 0 {
        log::warn!(
            "{truncated_windows} ambiguity windows held more than {} edges and were truncated",
            config.max_edges_per_window
        );
    }
    let mut pairs: Vec<_> = pairs.into_values().collect();
    pairs.sort_by_key(|p| (p.a, p.b));
    PairDetection {
        pairs,
        cell_counts,
        cols: grid.cols,
        rows: grid.rows,
        truncated_windows,
    }
}

/// Index pairs of `edges` whose undirected directions differ by less than
/// `theta`: sort by direction modulo π and sweep forward circularly.
fn close_pairs(edges: &[(EdgeId, f64)], theta: f64) -> Vec<(usize, usize)> {
    let mut order: Vec<(f64, usize)> = edges
        .iter()
        .enumerate()
        .map(|(i, &(_, a))| (a.rem_euclid(PI), i))
        .collect();
    order.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
    let n = order.len();
    let mut out = Vec::new();
    for i in 0..n {
        for step in 1..n {
            let j = (i + step) % n;
            let d = (order[j].0 - order[i].0).rem_euclid(PI);
            if d >= theta {
                break;
            }
            if acute_angle(edges[order[i].1].1, edges[order[j].1].1) < theta {
                let (x, y) = (order[i].1, order[j].1);
                out.push((x.min(y), x.max(y)));
            }
        }
    }
    // equal directions are reached from both sides of the sweep
    out.sort_unstable();
    out.dedup();
    out
}

/// Reachable-neighbour sets `N(s, e)` and `N(t, e)` for every edge.
#[derive(Clone, Debug, PartialEq)]
pub struct NeighborSets {
    pub at_source: Vec<BTreeSet<VertexId>>,
    pub at_target: Vec<BTreeSet<VertexId>>,
}

impl NeighborSets {
    pub fn from_pairs(drawing: &Drawing, pairs: &[AmbiguousPair]) -> Self {
        let mut at_source: Vec<BTreeSet<VertexId>> =
            drawing.edges.iter().map(|e| BTreeSet::from([e.t])).collect();
        let mut at_target: Vec<BTreeSet<VertexId>> =
            drawing.edges.iter().map(|e| BTreeSet::from([e.s])).collect();
        let add = |sets: &mut Vec<BTreeSet<VertexId>>, e: EdgeId, owner: VertexId, v: VertexId| {
            if v != owner {
                sets[e].insert(v);
            }
        };
        for p in pairs {
            for (e, f) in [(p.a, p.b), (p.b, p.a)] {
                let (s, t) = (drawing.edges[e].s, drawing.edges[e].t);
                let (u, v) = (drawing.edges[f].s, drawing.edges[f].t);
                let (near_s, near_t) = match p.orientation {
                    Orientation::Aligned => (u, v),
                    Orientation::AntiAligned => (v, u),
                };
                // travelling from s along e one may end up at the far end of f
                add(&mut at_source, e, s, near_t);
                add(&mut at_target, e, t, near_s);
            }
        }
        Self { at_source, at_target }
    }

    /// `(endpoint, edge, set)` triples.
    pub fn iter(&self, drawing: &Drawing) -> impl Iterator<Item = (VertexId, EdgeId, &BTreeSet<VertexId>)> {
        let src = self
            .at_source
            .iter()
            .enumerate()
            .map(|(e, set)| (drawing.edges[e].s, e, set));
        let tgt = self
            .at_target
            .iter()
            .enumerate()
            .map(|(e, set)| (drawing.edges[e].t, e, set));
        src.chain(tgt).collect::<Vec<_>>().into_iter()
    }

    /// Members of `N(v, e)` more than `delta` undirected hops from `v`.
    pub fn false_neighbors(
        &self,
        graph: &Graph,
        drawing: &Drawing,
        e: EdgeId,
        at_source: bool,
        delta: usize,
    ) -> Vec<VertexId> {
        let (v, set) = if at_source {
            (drawing.edges[e].s, &self.at_source[e])
        } else {
            (drawing.edges[e].t, &self.at_target[e])
        };
        set.iter()
            .copied()
            .filter(|&x| graph.undirected_hop_distance(v, x, delta).is_none())
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct AmbiguityResult {
    /// `amb^δ` for every requested `δ`.
    pub amb: BTreeMap<usize, f64>,
    pub neighbors: NeighborSets,
    pub detection: PairDetection,
}

/// Ambiguity of `drawing` for every `δ` in the configuration.
pub fn ambiguity_in_frame(
    drawing: &Drawing,
    graph: &Graph,
    frame: &Frame,
    config: &AmbiguityConfig,
) -> Result<AmbiguityResult> {
    config.validate()?;
    drawing.check_matches(graph)?;
    let grid = build_ambiguity_grid(drawing, frame, config);
    let detection = detect_ambiguous_pairs(&grid, config);
    let neighbors = NeighborSets::from_pairs(drawing, &detection.pairs);
    let amb = amb_values(graph, drawing, &neighbors, &config.delta_range);
    Ok(AmbiguityResult {
        amb,
        neighbors,
        detection,
    })
}

/// Ambiguity in a frame fitted to the drawing itself.
pub fn ambiguity(
    drawing: &Drawing,
    graph: &Graph,
    style: &super::raster::RasterStyle,
    config: &AmbiguityConfig,
) -> Result<AmbiguityResult> {
    let frame = Frame::for_drawings([drawing], style)?;
    ambiguity_in_frame(drawing, graph, &frame, config)
}

/// Ratio of false to all reachable neighbours, per `δ`.
pub fn amb_values(
    graph: &Graph,
    drawing: &Drawing,
    neighbors: &NeighborSets,
    deltas: &[usize],
) -> BTreeMap<usize, f64> {
    let max_delta = deltas.iter().copied().max().unwrap_or(1);
    let triples: Vec<_> = neighbors.iter(drawing).collect();

    // hop distance of every member from its owner, capped at max_delta
    let owners: BTreeSet<VertexId> = triples
        .iter()
        .filter(|(_, _, set)| set.len() > 1)
        .map(|(v, _, _)| *v)
        .collect();
    let balls: HashMap<VertexId, HashMap<VertexId, usize>> = owners
        .into_par_iter()
        .map(|v| (v, graph.undirected_ball(v, max_delta).into_iter().collect()))
        .collect();

    let total: usize = triples.iter().map(|(_, _, set)| set.len()).sum();
    let mut out = BTreeMap::new();
    for &delta in deltas {
        let mut false_count = 0usize;
        for (v, _, set) in &triples {
            // owners without a ball hold only the opposite endpoint, one hop away
            if let Some(ball) = balls.get(v) {
                false_count += set
                    .iter()
                    .filter(|x| ball.get(x).is_none_or(|&d| d > delta))
                    .count();
            }
        }
        let value = if total == 0 {
            0.0
        } else {
            false_count as f64 / total as f64
        };
        out.insert(delta, value);
    }
    out
}
