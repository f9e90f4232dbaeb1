use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use edgepath::bundling::{Bundler, BundlingParams};
use edgepath::datasets::{
    generate_cubes, generate_geometric, generate_noise, generate_uniform, CubesSpec, GeometricSpec,
    NoiseSpec, UniformSpec,
};
use edgepath::io::{load_graph, load_trail_drawing, write_edge_list, Format, LoadedGraph};
use edgepath::metrics::{evaluate_in_frame, AmbiguityConfig, Frame, MetricsConfig, RasterImage, RasterStyle};
use edgepath::render::{ambiguity_heatmap, distortion_heatmap, render_svg, RenderStyle};
use edgepath::{Drawing, Graph, Layout, MetricsReport};
use serde_json::{json, Value};

use crate::args::*;
use crate::error::CliError;
use crate::timing::{RunTimer, TimingReport};

/// Human-readable lines for stdout plus the same facts as JSON.
pub struct Outcome {
    pub text: String,
    pub json: Value,
}

pub const OUT_DIR_ENV: &str = "EDGEPATH_OUT_DIR";

fn out_dir() -> PathBuf {
    std::env::var_os(OUT_DIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."))
}

fn out_path(given: Option<PathBuf>, default_name: &str) -> PathBuf {
    given.unwrap_or_else(|| out_dir().join(default_name))
}

fn write_file(path: &Path, bytes: impl AsRef<[u8]>) -> Result<(), CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| CliError::File(parent.to_path_buf(), e))?;
    }
    std::fs::write(path, bytes).map_err(|e| CliError::File(path.to_path_buf(), e))
}

fn read_drawing(path: &Path) -> Result<Drawing, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::File(path.to_path_buf(), e))?;
    Ok(Drawing::from_json(&text)?)
}

fn check_file(path: &Path) -> Result<(), CliError> {
    std::fs::metadata(path)
        .map(|_| ())
        .map_err(|e| CliError::File(path.to_path_buf(), e))
}

fn image_bytes(img: &RasterImage, path: &Path) -> Result<Vec<u8>, CliError> {
    let png = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("png"));
    Ok(if png { img.to_png()? } else { img.to_pgm() })
}

fn report_dedup(loaded: &LoadedGraph) {
    let r = loaded.report;
    if r.self_loops > 0 || r.duplicates > 0 {
        log::warn!("dropped {} self-loop(s) and {} duplicate edge(s)", r.self_loops, r.duplicates);
    }
}

fn load_input(input: &GraphInput) -> Result<LoadedGraph, CliError> {
    check_file(&input.input)?;
    let mut loaded = load_graph(&input.input, input.format)?;
    report_dedup(&loaded);
    let forced = match input.directed {
        Directedness::Auto => None,
        Directedness::On => Some(true),
        Directedness::Off => Some(false),
    };
    if let Some(directed) = forced.filter(|&d| d != loaded.graph.is_directed()) {
        let (g, extra) = loaded.graph.with_directed(directed);
        if extra.duplicates > 0 {
            log::warn!("{} antiparallel edge(s) merged", extra.duplicates);
        }
        loaded.graph = g;
    }
    Ok(loaded)
}

pub fn generate(kind: Generate) -> Result<Outcome, CliError> {
    let (name, out, (graph, layout), spec) = match kind {
        Generate::Cubes {
            variant,
            n,
            side,
            extra_edges,
            directed,
            seed,
            out,
        } => {
            let spec = CubesSpec {
                total_vertices: n,
                side,
                variant,
                directed,
                seed,
                extra_edges_per_square: extra_edges,
            };
            ("cubes", out, generate_cubes(&spec)?, serde_json::to_value(&spec)?)
        }
        Generate::Noise { n, seed, out } => {
            let spec = NoiseSpec {
                total_vertices: n,
                seed,
            };
            let value = json!({ "total_vertices": n, "seed": seed });
            ("noise", out, generate_noise(&spec)?, value)
        }
        Generate::Geometric {
            n,
            edges,
            directed,
            seed,
            out,
        } => {
            let spec = GeometricSpec {
                total_vertices: n,
                edges,
                directed,
                seed,
            };
            ("geometric", out, generate_geometric(&spec)?, serde_json::to_value(spec)?)
        }
        Generate::Uniform {
            n,
            edges,
            directed,
            seed,
            out,
        } => {
            let spec = UniformSpec {
                total_vertices: n,
                edges,
                directed,
                seed,
            };
            ("uniform", out, generate_uniform(&spec)?, serde_json::to_value(spec)?)
        }
    };
    let path = out_path(out, &format!("{name}.txt"));
    write_file(&path, write_edge_list(&graph, &layout))?;
    Ok(Outcome {
        text: format!(
            "wrote {} ({} vertices, {} edges, {} component(s))\n",
            path.display(),
            graph.vertex_count(),
            graph.edge_count(),
            graph.component_count()
        ),
        json: json!({
            "command": "generate",
            "dataset": name,
            "spec": spec,
            "out": path,
            "vertices": graph.vertex_count(),
            "edges": graph.edge_count(),
        }),
    })
}

pub fn bundle(args: BundleArgs) -> Result<Outcome, CliError> {
    if args.repeat == 0 {
        return Err(CliError::Argument("--repeat must be at least 1".into()));
    }
    let params = BundlingParams {
        max_distortion: args.k,
        weight_exponent: args.d,
        smoothing: args.smoothing,
        samples_per_segment: args.samples,
        threshold: args.threshold_on,
    };
    params.validate()?;
    let path = out_path(args.out, "bundled.json");

    let mut runs = Vec::with_capacity(args.repeat);
    let mut stats = None;
    for _ in 0..args.repeat {
        let mut timer = RunTimer::start();
        let loaded = timer.phase("load", || load_input(&args.graph))?;
        let mut bundler = Bundler::new(&loaded.graph, &loaded.layout, params)?;
        timer.phase("bundle", || while bundler.step().is_some() {});
        let bundled = timer.phase("curves", || bundler.finish());
        timer
            .phase("check", || bundled.check_invariants())
            .map_err(CliError::Invariant)?;
        timer.phase("write", || -> Result<(), CliError> {
            write_file(&path, bundled.to_drawing().to_json()?)
        })?;
        stats = Some(bundled.stats());
        runs.push(timer.stop());
    }
    let stats = stats.expect("at least one run");
    let timing = TimingReport::from_runs(&runs).expect("at least one run");
    let mut text = format!(
        "wrote {}: {} bundled, {} locked, {} unbundled, longest path {} hops\n",
        path.display(),
        stats.bundled_count,
        stats.locked_count,
        stats.unbundled_count,
        stats.max_path_hops
    );
    text.push_str(&timing.to_text());
    Ok(Outcome {
        text,
        json: json!({
            "command": "bundle",
            "out": path,
            "params": params,
            "stats": stats,
            "timing": timing,
        }),
    })
}

pub fn straight(args: StraightArgs) -> Result<Outcome, CliError> {
    let loaded = load_input(&args.graph)?;
    let path = out_path(args.out, "straight.json");
    write_file(&path, Drawing::straight(&loaded.graph, &loaded.layout).to_json()?)?;
    Ok(Outcome {
        text: format!("wrote {}\n", path.display()),
        json: json!({ "command": "straight", "out": path, "edges": loaded.graph.edge_count() }),
    })
}

pub fn import(args: ImportArgs) -> Result<Outcome, CliError> {
    check_file(&args.trails)?;
    let (loaded, drawing) = load_trail_drawing(&args.trails, args.directed)?;
    report_dedup(&loaded);
    let graph_path = out_path(args.graph_out, "imported.txt");
    let drawing_path = out_path(args.drawing_out, "imported.json");
    write_file(&graph_path, write_edge_list(&loaded.graph, &loaded.layout))?;
    write_file(&drawing_path, drawing.to_json()?)?;
    Ok(Outcome {
        text: format!(
            "wrote {} and {} ({} vertices, {} edges)\n",
            graph_path.display(),
            drawing_path.display(),
            loaded.graph.vertex_count(),
            loaded.graph.edge_count()
        ),
        json: json!({
            "command": "import",
            "graph_out": graph_path,
            "drawing_out": drawing_path,
            "vertices": loaded.graph.vertex_count(),
            "edges": loaded.graph.edge_count(),
            "self_loops_dropped": loaded.report.self_loops,
            "duplicates_dropped": loaded.report.duplicates,
        }),
    })
}

fn raster_style(r: &RasterFlags) -> RasterStyle {
    RasterStyle {
        width_px: r.width,
        line_width_px: r.line_width,
        vertex_diameter_px: r.vertex_diameter,
        draw_vertices: true,
    }
}

fn metrics_config(m: &MetricFlags) -> Result<MetricsConfig, CliError> {
    let config = MetricsConfig {
        raster: raster_style(&m.raster),
        gray_threshold: m.gray_threshold,
        ambiguity: AmbiguityConfig {
            angle_threshold_deg: m.theta,
            proximity_epsilon_px: m.epsilon,
            cell_px: m.cell_px,
            window_cells: m.window,
            delta_range: m.delta.0.clone(),
            max_edges_per_window: m.max_window_edges,
        },
    };
    config.raster.validate()?;
    config.ambiguity.validate()?;
    if config.gray_threshold == 0 {
        return Err(CliError::Argument("--gray-threshold must be at least 1".into()));
    }
    Ok(config)
}

/// Graph for metric evaluation: from `--graph` when given, else recovered
/// from `fallback`.
fn reference_graph(graph: Option<&Path>, fallback: &Drawing) -> Result<(Graph, Layout), CliError> {
    match graph {
        Some(p) => {
            check_file(p)?;
            let loaded = load_graph(p, Format::EdgeList)?;
            report_dedup(&loaded);
            Ok((loaded.graph, loaded.layout))
        }
        None => Ok(fallback.graph()?),
    }
}

fn amb_text(report: &MetricsReport) -> String {
    report
        .amb
        .iter()
        .map(|(d, v)| format!("amb{d}={v:.4}"))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn metrics(args: MetricsArgs) -> Result<Outcome, CliError> {
    if args.repeat == 0 {
        return Err(CliError::Argument("--repeat must be at least 1".into()));
    }
    let config = metrics_config(&args.metrics)?;
    let path = out_path(args.out, "metrics.json");

    let mut runs = Vec::with_capacity(args.repeat);
    let mut result = None;
    for _ in 0..args.repeat {
        let mut timer = RunTimer::start();
        let (drawing, graph, baseline) = timer.phase("load", || -> Result<_, CliError> {
            let drawing = read_drawing(&args.drawing)?;
            let (graph, layout) = reference_graph(args.graph.as_deref(), &drawing)?;
            let baseline = match &args.baseline {
                Some(p) => read_drawing(p)?,
                None => Drawing::straight(&graph, &layout),
            };
            Ok((drawing, graph, baseline))
        })?;
        let (report, frame) = timer.phase("evaluate", || -> Result<_, CliError> {
            let frame = Frame::for_drawings([&drawing, &baseline], &config.raster)?;
            Ok((evaluate_in_frame(&drawing, &baseline, &graph, &frame, &config)?, frame))
        })?;
        timer.phase("write", || -> Result<(), CliError> {
            write_file(&path, serde_json::to_string_pretty(&report)?)?;
            if let Some(h) = &args.heatmap {
                let img = ambiguity_heatmap(
                    &report.ambiguity_cell_counts,
                    report.grid_cols,
                    report.grid_rows,
                    config.ambiguity.cell_px,
                    frame.width,
                    frame.height,
                    report.cell_counts_max(),
                )?;
                write_file(h, image_bytes(&img, h)?)?;
            }
            Ok(())
        })?;
        runs.push(timer.stop());
        result = Some(report);
    }
    let report = result.expect("at least one run");
    let timing = TimingReport::from_runs(&runs).expect("at least one run");
    let mut text = format!(
        "ink {:.4} (without vertices {:.4})\ndistortion mean {:.4} median {:.4}\n{}\nambiguous pairs {}\nwrote {}\n",
        report.ink_ratio,
        report.ink_ratio_without_vertices,
        report.distortion_mean,
        report.distortion_median,
        amb_text(&report),
        report.ambiguous_pairs,
        path.display()
    );
    text.push_str(&timing.to_text());
    Ok(Outcome {
        text,
        json: json!({
            "command": "metrics",
            "out": path,
            "heatmap": args.heatmap,
            "ink_ratio": report.ink_ratio,
            "ink_ratio_without_vertices": report.ink_ratio_without_vertices,
            "distortion_mean": report.distortion_mean,
            "distortion_median": report.distortion_median,
            "amb": report.amb,
            "ambiguous_pairs": report.ambiguous_pairs,
            "timing": timing,
        }),
    })
}

pub fn render(args: RenderArgs) -> Result<Outcome, CliError> {
    let drawing = read_drawing(&args.drawing)?;
    let style = RenderStyle {
        width_px: args.raster.width,
        line_width_px: args.raster.line_width,
        vertex_diameter_px: args.raster.vertex_diameter,
        mode: args.mode,
        background: args.background,
    };
    style.validate()?;
    let path = out_path(args.out, "drawing.svg");
    write_file(&path, render_svg(&drawing, &style)?)?;
    if let Some(r) = &args.raster_out {
        let img = edgepath::metrics::rasterize(&drawing, &style.raster())?;
        let img = match args.background {
            edgepath::render::Background::White => img.inverted(),
            edgepath::render::Background::Black => img,
        };
        write_file(r, image_bytes(&img, r)?)?;
    }
    Ok(Outcome {
        text: format!("wrote {}\n", path.display()),
        json: json!({ "command": "render", "out": path, "raster": args.raster_out }),
    })
}

fn file_label(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

pub fn compare(args: CompareArgs) -> Result<Outcome, CliError> {
    if !args.labels.is_empty() && args.labels.len() != args.drawings.len() {
        return Err(CliError::Argument(format!(
            "{} label(s) for {} drawing(s)",
            args.labels.len(),
            args.drawings.len()
        )));
    }
    let config = metrics_config(&args.metrics)?;
    let dir = args.out_dir.unwrap_or_else(|| out_dir().join("compare"));

    let baseline = read_drawing(&args.baseline)?;
    let (graph, _) = reference_graph(args.graph.as_deref(), &baseline)?;
    let drawings = args
        .drawings
        .iter()
        .map(|p| read_drawing(p))
        .collect::<Result<Vec<_>, _>>()?;
    let mut labels = vec!["Straight Line".to_string()];
    labels.extend(args.drawings.iter().enumerate().map(|(i, p)| {
        args.labels.get(i).cloned().unwrap_or_else(|| {
            p.file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| format!("drawing{i}"))
        })
    }));

    let all: Vec<&Drawing> = std::iter::once(&baseline).chain(&drawings).collect();
    let frame = Frame::for_drawings(all.iter().copied(), &config.raster)?;
    let reports = all
        .iter()
        .map(|d| evaluate_in_frame(d, &baseline, &graph, &frame, &config))
        .collect::<Result<Vec<_>, _>>()?;

    let deltas = &config.ambiguity.delta_range;
    let mut header = vec!["method".to_string(), "ink".into(), "dist_mean".into(), "dist_median".into()];
    header.extend(deltas.iter().map(|d| format!("amb{d}")));
    let rows: Vec<Vec<String>> = labels
        .iter()
        .zip(&reports)
        .map(|(label, r)| {
            let mut row = vec![
                label.clone(),
                format!("{:.2}", r.ink_ratio),
                format!("{:.2}", r.distortion_mean),
                format!("{:.2}", r.distortion_median),
            ];
            row.extend(deltas.iter().map(|d| format!("{:.2}", r.amb[d])));
            row
        })
        .collect();

    let mut csv = header.join(",") + "\n";
    for row in &rows {
        let cells: Vec<String> = row
            .iter()
            .map(|c| if c.contains([',', '"']) { format!("\"{}\"", c.replace('"', "\"\"")) } else { c.clone() })
            .collect();
        csv.push_str(&(cells.join(",") + "\n"));
    }
    let width = rows.iter().chain([&header]).map(|r| r[0].len()).max().unwrap_or(6);
    let mut table = String::new();
    for row in std::iter::once(&header).chain(&rows) {
        let _ = write!(table, "{:<width$}", row[0]);
        for c in &row[1..] {
            let _ = write!(table, "  {c:>11}");
        }
        table.push('\n');
    }

    write_file(&dir.join("table.txt"), &table)?;
    write_file(&dir.join("table.csv"), &csv)?;

    // heatmaps share one normalization so they can be read side by side
    let global_max = reports.iter().map(MetricsReport::cell_counts_max).max().unwrap_or(0);
    let render_style = RenderStyle {
        width_px: config.raster.width_px,
        line_width_px: config.raster.line_width_px,
        vertex_diameter_px: config.raster.vertex_diameter_px,
        ..RenderStyle::default()
    };
    let svgs = distortion_heatmap(&all, &render_style)?;
    let mut files = Vec::new();
    for (i, ((label, report), svg)) in labels.iter().zip(&reports).zip(&svgs).enumerate() {
        let stem = format!("{i:02}-{}", file_label(label));
        let heat = ambiguity_heatmap(
            &report.ambiguity_cell_counts,
            report.grid_cols,
            report.grid_rows,
            config.ambiguity.cell_px,
            frame.width,
            frame.height,
            global_max,
        )?;
        let metrics_path = dir.join(format!("{stem}.metrics.json"));
        let heat_path = dir.join(format!("{stem}.ambiguity.pgm"));
        let svg_path = dir.join(format!("{stem}.distortion.svg"));
        write_file(&metrics_path, serde_json::to_string_pretty(report)?)?;
        write_file(&heat_path, heat.to_pgm())?;
        write_file(&svg_path, svg)?;
        files.push(json!({ "label": label, "metrics": metrics_path, "heatmap": heat_path, "svg": svg_path }));
    }

    let json_rows: Vec<Value> = labels
        .iter()
        .zip(&reports)
        .map(|(label, r)| {
            json!({
                "method": label,
                "ink_ratio": r.ink_ratio,
                "distortion_mean": r.distortion_mean,
                "distortion_median": r.distortion_median,
                "amb": r.amb,
            })
        })
        .collect();
    Ok(Outcome {
        text: format!("{table}wrote {}\n", dir.display()),
        json: json!({
            "command": "compare",
            "out_dir": dir,
            "rows": json_rows,
            "heatmap_max": global_max,
            "files": files,
        }),
    })
}
