//! Acceptance suite. Prints one line per criterion and exits non-zero if
//! any criterion fails.
//!
//! The US Airlines criterion needs the dataset, which is not redistributed:
//! point `EDGEPATH_AIRLINES` at an edge-list file (or set
//! `EDGEPATH_AIRLINES_FORMAT=trail-set` for a trail set).

mod common;

use std::collections::{BTreeMap, HashSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use edgepath::bundling::smooth_control_points;
use edgepath::datasets::{
    generate_cubes, generate_geometric, generate_noise, generate_uniform, random_spanning_tree, CubesSpec,
    CubesVariant, GeometricSpec, NoiseSpec, UniformSpec,
};
use edgepath::io::{load_graph, write_edge_list, Format};
use edgepath::metrics::{
    ambiguity, build_ambiguity_grid, detect_ambiguous_pairs, distortion, evaluate, ink_reduction, rasterize_in_frame,
    AmbiguityConfig, Frame, MetricsConfig, RasterStyle,
};
use edgepath::render::{render_svg, RenderStyle};
use edgepath::{edge_path_bundle, BundledDrawing, BundlingParams, Drawing, Graph, Layout, Point};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::Rng;

#[derive(Clone, Copy, PartialEq)]
enum Status {
    Pass,
    Fail,
    Skipped,
    Reference,
}

struct Suite {
    lines: Vec<(String, Status, String)>,
}

impl Suite {
    fn record(&mut self, name: &str, status: Status, detail: String) {
        let tag = match status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
            Status::Reference => "REFERENCE",
        };
        println!("[{tag}] {name}: {detail}");
        self.lines.push((name.to_string(), status, detail));
    }

    fn check(&mut self, name: &str, ok: bool, detail: String) {
        self.record(name, if ok { Status::Pass } else { Status::Fail }, detail);
    }
}

struct Case {
    name: String,
    graph: Graph,
    layout: Layout,
    bundled: BundledDrawing,
}

fn case(name: String, graph: Graph, layout: Layout) -> Case {
    let bundled = edge_path_bundle(&graph, &layout, BundlingParams::default()).unwrap();
    Case {
        name,
        graph,
        layout,
        bundled,
    }
}

fn cubes_suite() -> Vec<Case> {
    let mut out = Vec::new();
    for variant in CubesVariant::ALL {
        for seed in 0..20 {
            for directed in [false, true] {
                let spec = CubesSpec {
                    directed,
                    ..CubesSpec::new(variant, seed)
                };
                let (g, l) = generate_cubes(&spec).unwrap();
                let tag = if directed { "directed" } else { "undirected" };
                out.push(case(format!("cubes {variant} seed {seed} {tag}"), g, l));
            }
        }
    }
    out
}

/// Path steps that are not edges of the graph (respecting direction).
fn path_violations(c: &Case) -> usize {
    let mut arcs = HashSet::new();
    for e in c.graph.edges() {
        arcs.insert((e.source, e.target));
        if !c.graph.is_directed() {
            arcs.insert((e.target, e.source));
        }
    }
    let mut bad = 0;
    for e in c.graph.edges() {
        if let Some(path) = &c.bundled.paths[e.id] {
            if path.first() != Some(&e.source) || path.last() != Some(&e.target) {
                bad += 1;
            }
            bad += path.windows(2).filter(|w| !arcs.contains(&(w[0], w[1]))).count();
        }
    }
    bad
}

/// Bundled edges whose control polyline exceeds `k` times the edge length.
fn budget_violations(c: &Case) -> usize {
    let k = c.bundled.params.max_distortion;
    c.graph
        .edges()
        .iter()
        .filter(|e| {
            c.bundled.paths[e.id].as_ref().is_some_and(|path| {
                let len: f64 = path
                    .windows(2)
                    .map(|w| c.layout.position(w[0]).distance(c.layout.position(w[1])))
                    .sum();
                let straight = c.layout.position(e.source).distance(c.layout.position(e.target));
                len > k * straight * (1.0 + 1e-9)
            })
        })
        .count()
}

fn weak_components(g: &Graph) -> Vec<usize> {
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    let mut p: Vec<usize> = (0..g.vertex_count()).collect();
    for e in g.edges() {
        let (a, b) = (find(&mut p, e.source), find(&mut p, e.target));
        p[a] = b;
    }
    (0..g.vertex_count()).map(|v| find(&mut p, v)).collect()
}

fn monotone(amb: &BTreeMap<usize, f64>) -> bool {
    let v: Vec<f64> = amb.values().copied().collect();
    v.windows(2).all(|w| w[1] <= w[0])
}

fn fmt_amb(amb: &BTreeMap<usize, f64>) -> String {
    amb.values().map(|v| format!("{v:.3}")).collect::<Vec<_>>().join("/")
}

fn criterion_noise(s: &mut Suite) {
    let mut ok = true;
    let mut details = Vec::new();
    let mut published = Vec::new();
    for seed in [1, 2, 3] {
        let start = Instant::now();
        let (g, l) = generate_noise(&NoiseSpec {
            total_vertices: 1000,
            seed,
        })
        .unwrap();
        let b = edge_path_bundle(&g, &l, BundlingParams::default()).unwrap();
        let straight = Drawing::straight(&g, &l);
        let bundled = b.to_drawing();
        let config = MetricsConfig::default();
        let r = evaluate(&bundled, &straight, &g, &config).unwrap();
        let elapsed = start.elapsed();
        let base = evaluate(&straight, &straight, &g, &config).unwrap();
        let first = r.amb[&1];
        let constant = r.amb.values().all(|&v| v == first);
        let near_straight = r
            .amb
            .iter()
            .all(|(d, v)| (v - base.amb[d]).abs() <= 0.05);
        let good = b.stats().bundled_count == 0
            && (r.ink_ratio - 1.0).abs() <= 0.01
            && r.distortion_mean == 1.0
            && r.distortion_median == 1.0
            && constant
            && near_straight
            && elapsed < Duration::from_secs(5);
        ok &= good;
        details.push(format!(
            "seed {seed}: bundled {} ink {:.3} dist {}/{} amb {} (straight {}) {:.0} ms",
            b.stats().bundled_count,
            r.ink_ratio,
            r.distortion_mean,
            r.distortion_median,
            fmt_amb(&r.amb),
            fmt_amb(&base.amb),
            elapsed.as_secs_f64() * 1e3
        ));
        published.push(first);
    }
    s.check("1 Noise no-op", ok, details.join("; "));
    let within = published.iter().all(|v| (v - 0.50).abs() <= 0.05);
    s.record(
        "1 (reference) Noise amb against the published 0.50",
        Status::Reference,
        format!(
            "measured {} with the default detector (8 px cells, 3x3 window); {}",
            published.iter().map(|v| format!("{v:.3}")).collect::<Vec<_>>().join(", "),
            if within {
                "within 0.05"
            } else {
                "outside 0.05; the detector grid and window behind it are unpublished"
            }
        ),
    );
}

fn load_airlines() -> Option<Result<(Graph, Layout), String>> {
    let path = std::env::var_os("EDGEPATH_AIRLINES")?;
    let format = std::env::var("EDGEPATH_AIRLINES_FORMAT").unwrap_or_else(|_| "edge-list".into());
    let loaded = format
        .parse::<Format>()
        .map_err(|e| e.to_string())
        .and_then(|f| load_graph(&path, f).map_err(|e| e.to_string()));
    Some(loaded.map(|l| (l.graph, l.layout)))
}

fn criterion_airlines(s: &mut Suite, airlines: &Option<Result<(Graph, Layout), String>>) {
    const NAME: &str = "6 US Airlines reproduction";
    let (g, l) = match airlines {
        None => {
            s.record(NAME, Status::Skipped, "dataset not supplied (set EDGEPATH_AIRLINES)".into());
            return;
        }
        Some(Err(e)) => {
            s.check(NAME, false, format!("could not load the dataset: {e}"));
            return;
        }
        Some(Ok(gl)) => gl,
    };
    let start = Instant::now();
    let c = case("airlines".into(), g.clone(), l.clone());
    let elapsed = start.elapsed();
    let straight = Drawing::straight(g, l);
    let r = evaluate(&c.bundled.to_drawing(), &straight, g, &MetricsConfig::default()).unwrap();
    let ink_ok = (r.ink_ratio - 0.56).abs() <= 0.05 || (r.ink_ratio_without_vertices - 0.56).abs() <= 0.05;
    let dist_ok = (r.distortion_mean - 1.08).abs() <= 0.03 && (r.distortion_median - 1.05).abs() <= 0.03;
    let amb_ok = (r.amb[&1] - 0.87).abs() <= 0.05 && (r.amb[&2] - 0.04).abs() <= 0.03;
    let fallback = monotone(&r.amb) && path_violations(&c) == 0;
    let fast = elapsed < Duration::from_secs(10);
    let detail = format!(
        "|V| {} |E| {}; ink {:.3} (no disks {:.3}); dist {:.3}/{:.3}; amb {}; bundling {:.0} ms{}",
        g.vertex_count(),
        g.edge_count(),
        r.ink_ratio,
        r.ink_ratio_without_vertices,
        r.distortion_mean,
        r.distortion_median,
        fmt_amb(&r.amb),
        elapsed.as_secs_f64() * 1e3,
        if amb_ok { "" } else { "; amb outside tolerance, property fallback applied" }
    );
    s.check(NAME, ink_ok && dist_ok && (amb_ok || fallback) && fast, detail);
}

fn diameter(g: &Graph) -> usize {
    (0..g.vertex_count())
        .map(|v| g.undirected_ball(v, usize::MAX).into_iter().map(|(_, d)| d).max().unwrap_or(0))
        .max()
        .unwrap_or(0)
}

fn connected_instance(seed: u64) -> (Graph, Layout) {
    let mut r = common::rng(seed);
    let n = r.random_range(20..80);
    let ids: Vec<usize> = (0..n).collect();
    let mut edges = random_spanning_tree(&ids, &mut r);
    let extra = r.random_range(0..n);
    while edges.len() < n - 1 + extra {
        let (a, b) = (r.random_range(0..n), r.random_range(0..n));
        if a != b && !edges.contains(&(a, b)) && !edges.contains(&(b, a)) {
            edges.push((a, b));
        }
    }
    let positions = (0..n).map(|_| Point::new(r.random(), r.random())).collect();
    (Graph::new(n, &edges, false).unwrap(), Layout::new(positions).unwrap())
}

fn criterion_ambiguity(s: &mut Suite, suite: &[Case]) {
    let config = AmbiguityConfig::default();
    let style = RasterStyle::default();
    let mut drawings = 0;
    let mut non_monotone = Vec::new();
    for c in suite {
        let straight = Drawing::straight(&c.graph, &c.layout);
        for d in [c.bundled.to_drawing(), straight.clone()] {
            if d.edges.is_empty() {
                continue;
            }
            let r = ambiguity(&d, &c.graph, &style, &config).unwrap();
            drawings += 1;
            if !monotone(&r.amb) {
                non_monotone.push(c.name.clone());
            }
        }
    }
    let mut not_zero = Vec::new();
    for seed in 0..10 {
        let (g, l) = connected_instance(seed);
        let d = edge_path_bundle(&g, &l, BundlingParams::default()).unwrap().to_drawing();
        let diam = diameter(&g);
        let cfg = AmbiguityConfig {
            delta_range: (1..=diam).collect(),
            ..AmbiguityConfig::default()
        };
        let r = ambiguity(&d, &g, &style, &cfg).unwrap();
        if r.amb[&diam] != 0.0 || !monotone(&r.amb) {
            not_zero.push(seed);
        }
    }
    let mut oracle_mismatch = Vec::new();
    let small = RasterStyle {
        width_px: 160,
        ..RasterStyle::default()
    };
    let amb_config = AmbiguityConfig::default();
    let mut oracle_pairs = 0;
    for seed in 0..50 {
        let d = common::random_drawing(1_000 + seed, 10);
        let frame = Frame::for_drawings([&d], &small).unwrap();
        let found = detect_ambiguous_pairs(&build_ambiguity_grid(&d, &frame, &amb_config), &amb_config);
        let (expected, _) = common::brute_force_pairs(&d, &frame, &amb_config);
        let got: Vec<_> = found.pairs.iter().map(|p| (p.a, p.b, p.orientation)).collect();
        let want: Vec<_> = expected.iter().map(|p| (p.a, p.b, p.orientation)).collect();
        oracle_pairs += want.len();
        if got != want {
            oracle_mismatch.push(seed);
        }
    }
    s.check(
        "7 Ambiguity-metric internal properties",
        non_monotone.is_empty() && not_zero.is_empty() && oracle_mismatch.is_empty(),
        format!(
            "{drawings} drawings, {} not monotone in delta; 10 connected graphs, {} not zero at the diameter; \
             50 oracle drawings ({oracle_pairs} pairs), {} mismatches",
            non_monotone.len(),
            not_zero.len(),
            oracle_mismatch.len()
        ),
    );
}

fn pipeline(seed: u64) -> Vec<Vec<u8>> {
    let spec = CubesSpec {
        directed: true,
        ..CubesSpec::new(CubesVariant::R3, seed)
    };
    let (g, l) = generate_cubes(&spec).unwrap();
    let b = edge_path_bundle(&g, &l, BundlingParams::default()).unwrap();
    let d = b.to_drawing();
    let straight = Drawing::straight(&g, &l);
    let report = evaluate(&d, &straight, &g, &MetricsConfig::default()).unwrap();
    let style = RasterStyle::default();
    let frame = Frame::for_drawings([&d, &straight], &style).unwrap();
    vec![
        write_edge_list(&g, &l).into_bytes(),
        d.to_json().unwrap().into_bytes(),
        serde_json::to_vec(&report).unwrap(),
        render_svg(&d, &RenderStyle::default()).unwrap().into_bytes(),
        rasterize_in_frame(&d, &frame, &style).inverted().to_png().unwrap(),
        rasterize_in_frame(&d, &frame, &style).to_pgm(),
    ]
}

fn criterion_determinism(s: &mut Suite, suite: &[Case]) {
    let style = RasterStyle::default();
    let mut ink_not_one = 0;
    let mut max_straight_dev: f64 = 0.0;
    for c in suite {
        let straight = Drawing::straight(&c.graph, &c.layout);
        for v in distortion(&straight).unwrap().per_edge {
            max_straight_dev = max_straight_dev.max((v - 1.0).abs());
        }
        if c.graph.edge_count() == 0 {
            continue;
        }
        let bundled = c.bundled.to_drawing();
        let frame = Frame::for_drawings([&bundled, &straight], &style).unwrap();
        for d in [&bundled, &straight] {
            let img = rasterize_in_frame(d, &frame, &style);
            if ink_reduction(&img, &img, 1).unwrap() != 1.0 {
                ink_not_one += 1;
            }
        }
    }
    let identical = pipeline(5) == pipeline(5);
    s.check(
        "8 Metric determinism and inversion checks",
        ink_not_one == 0 && max_straight_dev <= 1e-9 && identical,
        format!(
            "ink(I,I) != 1 on {ink_not_one} images; max |straight distortion - 1| = {max_straight_dev:e}; \
             repeated pipeline byte-identical: {identical}"
        ),
    );
}

fn criterion_smoothing(s: &mut Suite) {
    let mut runner = TestRunner::new(Config {
        cases: 2000,
        failure_persistence: None,
        ..Config::default()
    });
    let strategy = (
        prop::collection::vec((-1e3..1e3f64, -1e3..1e3f64), 2..30),
        1u32..=5,
    );
    let result = runner.run(&strategy, |(raw, n)| {
        let pts: Vec<Point> = raw.iter().map(|&(x, y)| Point::new(x, y)).collect();
        let out = smooth_control_points(&pts, n);
        prop_assert_eq!(out.len(), (pts.len() - 1) * (1usize << (n - 1)) + 1);
        prop_assert_eq!(out[0], pts[0]);
        prop_assert_eq!(out[out.len() - 1], pts[pts.len() - 1]);
        Ok(())
    });
    s.check(
        "9 Smoothing arithmetic",
        result.is_ok(),
        match result {
            Ok(()) => "2000 random control lists, n in 1..=5: (p-1)*2^(n-1)+1 points, endpoints fixed".into(),
            Err(e) => e.to_string(),
        },
    );
}

fn min_time(runs: usize, mut f: impl FnMut()) -> f64 {
    (0..runs)
        .map(|_| {
            let t = Instant::now();
            f();
            t.elapsed().as_secs_f64()
        })
        .fold(f64::INFINITY, f64::min)
}

fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    cov / var
}

fn criterion_scale(s: &mut Suite) {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    pool.install(|| {
        let (g, l) = generate_geometric(&GeometricSpec {
            total_vertices: 1700,
            edges: 6500,
            directed: false,
            seed: 1,
        })
        .unwrap();
        let start = Instant::now();
        let b = edge_path_bundle(&g, &l, BundlingParams::default()).unwrap();
        let elapsed = start.elapsed();
        let stats = b.stats();

        let sizes = [500usize, 1000, 2000, 4000];
        let mut trends = Vec::new();
        let families: [(&str, bool, f64); 3] = [
            ("geometric, k 2", true, 2.0),
            ("uniform, k 2", false, 2.0),
            ("uniform, unbounded k", false, 1e9),
        ];
        for (label, geometric, k) in families {
            let params = BundlingParams {
                max_distortion: k,
                ..BundlingParams::default()
            };
            let times: Vec<f64> = sizes
                .iter()
                .map(|&m| {
                    let (g, l) = if geometric {
                        generate_geometric(&GeometricSpec {
                            total_vertices: m / 4,
                            edges: m,
                            directed: false,
                            seed: 2,
                        })
                    } else {
                        generate_uniform(&UniformSpec {
                            total_vertices: m / 4,
                            edges: m,
                            directed: false,
                            seed: 2,
                        })
                    }
                    .unwrap();
                    min_time(3, || {
                        edge_path_bundle(&g, &l, params).unwrap();
                    })
                })
                .collect();
            let xs: Vec<f64> = sizes.iter().map(|&m| m as f64).collect();
            trends.push((label, loglog_slope(&xs, &times), times));
        }
        let trend_ok = trends.iter().all(|(_, slope, _)| *slope <= 2.5);
        let trend_text = trends
            .iter()
            .map(|(label, slope, times)| {
                format!(
                    "{label}: slope {slope:.2} ({})",
                    times.iter().map(|t| format!("{:.1}", t * 1e3)).collect::<Vec<_>>().join("/")
                )
            })
            .collect::<Vec<_>>()
            .join("; ");
        s.check(
            "10 Scale sanity",
            elapsed < Duration::from_secs(60) && trend_ok,
            format!(
                "1700 vertices / 6500 edges single-threaded in {:.0} ms ({} bundled); \
                 |E| = 500/1000/2000/4000 ms, {trend_text}",
                elapsed.as_secs_f64() * 1e3,
                stats.bundled_count
            ),
        );
    });
}

fn main() -> ExitCode {
    let mut s = Suite { lines: Vec::new() };
    let started = Instant::now();

    criterion_noise(&mut s);

    let airlines = load_airlines();
    let mut suite = cubes_suite();
    for seed in 0..1000u64 {
        let (g, l) = common::random_graph(seed, 25);
        suite.push(case(format!("random graph {seed}"), g, l));
    }
    let (g, l) = generate_geometric(&GeometricSpec {
        total_vertices: 1700,
        edges: 6500,
        directed: false,
        seed: 1,
    })
    .unwrap();
    suite.push(case("geometric stand-in".into(), g, l));
    let (g, l) = generate_noise(&NoiseSpec {
        total_vertices: 1000,
        seed: 1,
    })
    .unwrap();
    suite.push(case("noise".into(), g, l));
    if let Some(Ok((g, l))) = &airlines {
        suite.push(case("airlines".into(), g.clone(), l.clone()));
    }

    let cubes = &suite[..160];
    let bad_paths: usize = cubes.iter().map(path_violations).sum();
    let bundled: usize = cubes.iter().map(|c| c.bundled.stats().bundled_count).sum();
    let real = suite.iter().filter(|c| c.name == "airlines").map(path_violations).sum::<usize>();
    s.check(
        "2 Independent-edge-ambiguity freedom",
        bad_paths == 0 && real == 0,
        format!(
            "Cubes 1R-4R x 20 seeds, undirected and directed: {bundled} bundled edges, {bad_paths} invalid path steps; \
             real datasets: {}",
            if airlines.is_some() {
                format!("{real} invalid steps")
            } else {
                "none supplied".into()
            }
        ),
    );

    let over: usize = suite.iter().map(budget_violations).sum();
    let checked: usize = suite.iter().map(|c| c.bundled.stats().bundled_count).sum();
    s.check(
        "3 Distortion budget",
        over == 0,
        format!("{checked} bundled edges over {} graphs, {over} over budget", suite.len()),
    );

    let mut cross = 0;
    let mut twor_bundled = 0;
    for c in cubes.iter().filter(|c| c.name.starts_with("cubes 2R")) {
        let comp = weak_components(&c.graph);
        for e in c.graph.edges() {
            if let Some(path) = &c.bundled.paths[e.id] {
                twor_bundled += 1;
                cross += path.iter().filter(|&&v| comp[v] != comp[e.source]).count();
            }
        }
    }
    s.check(
        "4 Cross-component purity",
        cross == 0,
        format!("Cubes 2R x 20 seeds x 2 orientations: {twor_bundled} bundled edges, {cross} foreign path vertices"),
    );

    let mut mismatched = Vec::new();
    let mut oracle_bundled = 0;
    for c in suite.iter().filter(|c| c.name.starts_with("random graph")) {
        let want = common::oracle_bundle(&c.graph, &c.layout, &BundlingParams::default());
        oracle_bundled += want.iter().flatten().count();
        if want != c.bundled.paths {
            mismatched.push(c.name.clone());
        }
    }
    s.check(
        "5 Dijkstra pruning soundness",
        mismatched.is_empty(),
        format!(
            "1000 random graphs (<= 25 vertices): {oracle_bundled} oracle bundles, {} graphs differ{}",
            mismatched.len(),
            mismatched.first().map(|m| format!(" (first: {m})")).unwrap_or_default()
        ),
    );

    criterion_airlines(&mut s, &airlines);

    let metric_suite: Vec<&Case> = suite
        .iter()
        .filter(|c| !c.name.starts_with("random graph") || c.name.ends_with('0'))
        .collect();
    let metric_cases: Vec<Case> = metric_suite
        .into_iter()
        .map(|c| Case {
            name: c.name.clone(),
            graph: c.graph.clone(),
            layout: c.layout.clone(),
            bundled: c.bundled.clone(),
        })
        .collect();
    criterion_ambiguity(&mut s, &metric_cases);
    criterion_determinism(&mut s, &metric_cases);
    criterion_smoothing(&mut s);
    criterion_scale(&mut s);

    let failed = s.lines.iter().filter(|l| l.1 == Status::Fail).count();
    let passed = s.lines.iter().filter(|l| l.1 == Status::Pass).count();
    let skipped = s.lines.iter().filter(|l| l.1 == Status::Skipped).count();
    println!(
        "acceptance: {passed} passed, {failed} failed, {skipped} skipped in {:.1} s",
        started.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
