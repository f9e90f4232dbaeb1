//! Seeded synthetic benchmarks: the four-square "Cubes" family, Noise
//! (random perfect matching) and random geometric graphs for scale runs.
//!
//! Every generator draws from ChaCha8 seeded with the user seed, with a
//! separate stream per purpose so that changing one parameter does not
//! reshuffle unrelated draws.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::graph::{Graph, Layout, VertexId};

/// RNG stream ids.
mod stream {
    pub const PLACEMENT: u64 = 1;
    pub const TREE: u64 = 2;
    pub const EXTRA_EDGES: u64 = 3;
    pub const INTER_EDGES: u64 = 4;
    pub const ORIENTATION: u64 = 5;
    pub const MATCHING: u64 = 6;
}

fn rng_for(seed: u64, purpose: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(purpose);
    rng
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CubesVariant {
    R1,
    R2,
    R3,
    R4,
}

impl CubesVariant {
    pub const ALL: [CubesVariant; 4] = [Self::R1, Self::R2, Self::R3, Self::R4];

    /// Vertical gap between the top and bottom rows of squares.
    pub fn gap(self, side: f64) -> f64 {
        match self {
            Self::R1 | Self::R4 => side / 10.0,
            Self::R2 => 0.0,
            Self::R3 => -side / 5.0,
        }
    }

    pub fn diagonal(self) -> bool {
        self == Self::R4
    }
}

impl FromStr for CubesVariant {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_uppercase().as_str() {
            "1R" | "R1" => Ok(Self::R1),
            "2R" | "R2" => Ok(Self::R2),
            "3R" | "R3" => Ok(Self::R3),
            "4R" | "R4" => Ok(Self::R4),
            other => Err(format!("unknown Cubes variant `{other}` (expected 1R..4R)")),
        }
    }
}

impl fmt::Display for CubesVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = match self {
            Self::R1 => 1,
            Self::R2 => 2,
            Self::R3 => 3,
            Self::R4 => 4,
        };
        write!(f, "{n}R")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CubesSpec {
    pub total_vertices: usize,
    pub side: f64,
    pub variant: CubesVariant,
    pub directed: bool,
    pub seed: u64,
    /// Random edges added inside each square on top of its spanning tree.
    /// Defaults to an eighth of the square's vertex count.
    pub extra_edges_per_square: Option<usize>,
}

impl CubesSpec {
    pub fn new(variant: CubesVariant, seed: u64) -> Self {
        Self {
            total_vertices: 100,
            side: 1.0,
            variant,
            directed: false,
            seed,
            extra_edges_per_square: None,
        }
    }
}

/// Square index: top-left, top-right, bottom-left, bottom-right.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quadrant {
    TopLeft = 0,
    TopRight = 1,
    BottomLeft = 2,
    BottomRight = 3,
}

/// Lower-left corner of each square for side `s` and vertical gap `gap`.
pub fn cubes_square_origin(q: Quadrant, side: f64, gap: f64) -> Point {
    let x = match q {
        Quadrant::TopLeft | Quadrant::BottomLeft => 0.0,
        Quadrant::TopRight | Quadrant::BottomRight => 3.0 * side,
    };
    let y = match q {
        Quadrant::BottomLeft | Quadrant::BottomRight => 0.0,
        Quadrant::TopLeft | Quadrant::TopRight => side + gap,
    };
    Point::new(x, y)
}

pub fn generate_cubes(spec: &CubesSpec) -> Result<(Graph, Layout)> {
    let n = spec.total_vertices;
    if n == 0 || !n.is_multiple_of(4) {
        return Err(Error::InvalidParameter(format!(
            "Cubes needs a positive vertex count divisible by 4, got {n}"
        )));
    }
    if !(spec.side > 0.0 && spec.side.is_finite()) {
        return Err(Error::InvalidParameter("Cubes side length must be positive".into()));
    }
    let m = n / 4;
    let side = spec.side;
    let gap = spec.variant.gap(side);
    let quads = [
        Quadrant::TopLeft,
        Quadrant::TopRight,
        Quadrant::BottomLeft,
        Quadrant::BottomRight,
    ];

    let mut placement = rng_for(spec.seed, stream::PLACEMENT);
    let mut positions = Vec::with_capacity(n);
    for q in quads {
        let o = cubes_square_origin(q, side, gap);
        for _ in 0..m {
            positions.push(Point::new(
                o.x + placement.random::<f64>() * side,
                o.y + placement.random::<f64>() * side,
            ));
        }
    }

    let members = |q: Quadrant| -> Vec<VertexId> { (q as usize * m..(q as usize + 1) * m).collect() };
    let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
    let mut present: HashSet<(VertexId, VertexId)> = HashSet::new();
    let key = |a: VertexId, b: VertexId| (a.min(b), a.max(b));

    let mut tree_rng = rng_for(spec.seed, stream::TREE);
    let mut extra_rng = rng_for(spec.seed, stream::EXTRA_EDGES);
    let extra = spec.extra_edges_per_square.unwrap_or(m / 8);
    for q in quads {
        let ids = members(q);
        for (a, b) in random_spanning_tree(&ids, &mut tree_rng) {
            present.insert(key(a, b));
            edges.push((a, b));
        }
        let max_edges = m * (m.saturating_sub(1)) / 2;
        let mut added = 0;
        while added < extra && ids.len() - 1 + added < max_edges {
            let a = ids[extra_rng.random_range(0..m)];
            let b = ids[extra_rng.random_range(0..m)];
            if a != b && present.insert(key(a, b)) {
                edges.push((a, b));
                added += 1;
            }
        }
    }

    let pairings = if spec.variant.diagonal() {
        [
            (Quadrant::TopLeft, Quadrant::BottomRight),
            (Quadrant::BottomLeft, Quadrant::TopRight),
        ]
    } else {
        [
            (Quadrant::TopLeft, Quadrant::TopRight),
            (Quadrant::BottomLeft, Quadrant::BottomRight),
        ]
    };
    let inter_total = n / 2;
    let mut inter_rng = rng_for(spec.seed, stream::INTER_EDGES);
    let mut inter = Vec::with_capacity(inter_total);
    for (i, &(left, right)) in pairings.iter().enumerate() {
        let want = if i == 0 {
            inter_total.div_ceil(2)
        } else {
            inter_total / 2
        };
        let (ls, rs) = (members(left), members(right));
        let mut got = 0;
        while got < want.min(m * m) {
            let a = ls[inter_rng.random_range(0..m)];
            let b = rs[inter_rng.random_range(0..m)];
            if present.insert(key(a, b)) {
                inter.push((a, b));
                got += 1;
            }
        }
    }

    if spec.directed {
        let mut orient = rng_for(spec.seed, stream::ORIENTATION);
        for e in edges.iter_mut() {
            if orient.random::<bool>() {
                *e = (e.1, e.0);
            }
        }
        // alternate left->right and right->left
        for (i, e) in inter.iter_mut().enumerate() {
            if i % 2 == 1 {
                *e = (e.1, e.0);
            }
        }
    }
    edges.extend(inter);

    let graph = Graph::new(n, &edges, spec.directed)?;
    Ok((graph, Layout::new(positions)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NoiseSpec {
    pub total_vertices: usize,
    pub seed: u64,
}

/// Uniform vertices in the unit square joined by a random perfect matching.
pub fn generate_noise(spec: &NoiseSpec) -> Result<(Graph, Layout)> {
    let n = spec.total_vertices;
    if !n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "Noise needs an even vertex count, got {n}"
        )));
    }
    let mut placement = rng_for(spec.seed, stream::PLACEMENT);
    let positions = (0..n)
        .map(|_| Point::new(placement.random(), placement.random()))
        .collect();
    let mut ids: Vec<VertexId> = (0..n).collect();
    ids.shuffle(&mut rng_for(spec.seed, stream::MATCHING));
    let edges: Vec<_> = ids.chunks(2).map(|c| (c[0], c[1])).collect();
    Ok((Graph::new(n, &edges, false)?, Layout::new(positions)?))
}

/// Random spanning tree over `vertex_ids` (Wilson's algorithm on the
/// complete graph, i.e. a uniformly random tree).
pub fn random_spanning_tree<R: Rng + ?Sized>(vertex_ids: &[VertexId], rng: &mut R) -> Vec<(VertexId, VertexId)> {
    let n = vertex_ids.len();
    if n < 2 {
        return Vec::new();
    }
    let mut in_tree = vec![false; n];
    let mut next = vec![usize::MAX; n];
    in_tree[rng.random_range(0..n)] = true;
    let mut edges = Vec::with_capacity(n - 1);
    for start in 0..n {
        // loop-erased random walk until the tree is hit
        let mut u = start;
        while !in_tree[u] {
            let mut v = rng.random_range(0..n - 1);
            if v >= u {
                v += 1;
            }
            next[u] = v;
            u = v;
        }
        let mut u = start;
        while !in_tree[u] {
            in_tree[u] = true;
            edges.push((vertex_ids[u], vertex_ids[next[u]]));
            u = next[u];
        }
    }
    edges
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GeometricSpec {
    pub total_vertices: usize,
    pub edges: usize,
    pub directed: bool,
    pub seed: u64,
}

/// Uniform vertices in the unit square joined by the `edges` closest pairs
/// (a random geometric graph with the radius chosen to hit the edge count).
/// Directed variants orient each edge at random.
pub fn generate_geometric(spec: &GeometricSpec) -> Result<(Graph, Layout)> {
    let n = spec.total_vertices;
    let max = n * n.saturating_sub(1) / 2;
    if spec.edges > max {
        return Err(Error::InvalidParameter(format!(
            "{} edges requested but only {max} pairs exist",
            spec.edges
        )));
    }
    let mut placement = rng_for(spec.seed, stream::PLACEMENT);
    let positions: Vec<Point> = (0..n)
        .map(|_| Point::new(placement.random(), placement.random()))
        .collect();
    let mut pairs = Vec::with_capacity(max);
    for a in 0..n {
        for b in a + 1..n {
            pairs.push((positions[a].distance(positions[b]), a, b));
        }
    }
    if spec.edges < pairs.len() {
        pairs.select_nth_unstable_by(spec.edges, |x, y| x.0.total_cmp(&y.0));
        pairs.truncate(spec.edges);
    }
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0).then((x.1, x.2).cmp(&(y.1, y.2))));
    let mut orient = rng_for(spec.seed, stream::ORIENTATION);
    let edges: Vec<_> = pairs
        .into_iter()
        .map(|(_, a, b)| {
            if spec.directed && orient.random::<bool>() {
                (b, a)
            } else {
                (a, b)
            }
        })
        .collect();
    Ok((Graph::new(n, &edges, spec.directed)?, Layout::new(positions)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct UniformSpec {
    pub total_vertices: usize,
    pub edges: usize,
    pub directed: bool,
    pub seed: u64,
}

/// Uniform vertices in the unit square joined by `edges` distinct vertex
/// pairs drawn uniformly at random.
pub fn generate_uniform(spec: &UniformSpec) -> Result<(Graph, Layout)> {
    let n = spec.total_vertices;
    let max = n * n.saturating_sub(1) / 2;
    if spec.edges > max / 2 {
        return Err(Error::InvalidParameter(format!(
            "{} edges is too dense for {n} vertices",
            spec.edges
        )));
    }
    let mut placement = rng_for(spec.seed, stream::PLACEMENT);
    let positions: Vec<Point> = (0..n)
        .map(|_| Point::new(placement.random(), placement.random()))
        .collect();
    let mut pick = rng_for(spec.seed, stream::INTER_EDGES);
    let mut orient = rng_for(spec.seed, stream::ORIENTATION);
    let mut present = HashSet::new();
    let mut edges = Vec::with_capacity(spec.edges);
    while edges.len() < spec.edges {
        let (a, b) = (pick.random_range(0..n), pick.random_range(0..n));
        if a == b || !present.insert((a.min(b), a.max(b))) {
            continue;
        }
        edges.push(if spec.directed && orient.random::<bool>() { (b, a) } else { (a, b) });
    }
    Ok((Graph::new(n, &edges, spec.directed)?, Layout::new(positions)?))
}
