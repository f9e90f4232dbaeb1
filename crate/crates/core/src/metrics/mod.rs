//! Quality metrics for any drawing in the interchange format: ink
//! reduction, distortion and ambiguity.

pub mod ambiguity;
pub mod raster;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use ambiguity::{
    ambiguity, ambiguity_in_frame, build_ambiguity_grid, detect_ambiguous_pairs, AmbiguityConfig,
    AmbiguityGrid, AmbiguityResult, AmbiguousPair, NeighborSets, Orientation,
};
pub use raster::{rasterize, rasterize_in_frame, Frame, RasterImage, RasterStyle};

use crate::drawing::Drawing;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Occupied pixels of `bundled` divided by occupied pixels of `baseline`,
/// a pixel being occupied when its gray value is at least `gray_threshold`.
pub fn ink_reduction(bundled: &RasterImage, baseline: &RasterImage, gray_threshold: u8) -> Result<f64> {
    if bundled.width != baseline.width || bundled.height != baseline.height {
        return Err(Error::DimensionMismatch(
            bundled.width,
            bundled.height,
            baseline.width,
            baseline.height,
        ));
    }
    let base = baseline.occupied(gray_threshold);
    if base == 0 {
        return Err(Error::EmptyBaseline);
    }
    Ok(bundled.occupied(gray_threshold) as f64 / base as f64)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistortionSummary {
    pub mean: f64,
    pub median: f64,
    pub per_edge: Vec<f64>,
}

/// Curve length over straight-line endpoint distance, per edge.
pub fn distortion(drawing: &Drawing) -> Result<DistortionSummary> {
    let per_edge = drawing
        .edges
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let straight = drawing.vertices[e.s].distance(drawing.vertices[e.t]);
            if straight == 0.0 {
                Err(Error::ZeroLengthEdge(i))
            } else {
                Ok(e.arc_length() / straight)
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    let n = per_edge.len();
    if n == 0 {
        return Ok(DistortionSummary {
            mean: 1.0,
            median: 1.0,
            per_edge,
        });
    }
    let mean = per_edge.iter().sum::<f64>() / n as f64;
    let mut sorted = per_edge.clone();
    sorted.sort_by(f64::total_cmp);
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    };
    Ok(DistortionSummary {
        mean,
        median,
        per_edge,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsConfig {
    pub raster: RasterStyle,
    pub gray_threshold: u8,
    pub ambiguity: AmbiguityConfig,
}

impl Default for MetricsConfig {
    fn default() -> Self {
        Self {
            raster: RasterStyle::default(),
            gray_threshold: 1,
            ambiguity: AmbiguityConfig::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MetricsReport {
    pub ink_ratio: f64,
    /// Ink ratio with vertex disks left out of both images.
    pub ink_ratio_without_vertices: f64,
    pub distortion_mean: f64,
    pub distortion_median: f64,
    pub distortion_per_edge: Vec<f64>,
    pub amb: BTreeMap<usize, f64>,
    pub ambiguous_pairs: usize,
    pub grid_cols: usize,
    pub grid_rows: usize,
    /// Row-major per-cell ambiguous pair counts.
    pub ambiguity_cell_counts: Vec<u32>,
}

impl MetricsReport {
    pub fn cell_counts_max(&self) -> u32 {
        self.ambiguity_cell_counts.iter().copied().max().unwrap_or(0)
    }
}

/// All metrics of `drawing` against `baseline` (normally the straight-line
/// drawing of `graph`), rasterized in one shared frame.
pub fn evaluate(
    drawing: &Drawing,
    baseline: &Drawing,
    graph: &Graph,
    config: &MetricsConfig,
) -> Result<MetricsReport> {
    let frame = Frame::for_drawings([drawing, baseline], &config.raster)?;
    evaluate_in_frame(drawing, baseline, graph, &frame, config)
}

pub fn evaluate_in_frame(
    drawing: &Drawing,
    baseline: &Drawing,
    graph: &Graph,
    frame: &Frame,
    config: &MetricsConfig,
) -> Result<MetricsReport> {
    config.raster.validate()?;
    drawing.check_matches(graph)?;
    baseline.check_matches(graph)?;

    let ink = |style: &RasterStyle| -> Result<f64> {
        let a = rasterize_in_frame(drawing, frame, style);
        let b = rasterize_in_frame(baseline, frame, style);
        ink_reduction(&a, &b, config.gray_threshold)
    };
    let ink_ratio = ink(&config.raster)?;
    let ink_ratio_without_vertices = ink(&RasterStyle {
        draw_vertices: false,
        ..config.raster
    })?;
    let dist = distortion(drawing)?;
    let amb = ambiguity_in_frame(drawing, graph, frame, &config.ambiguity)?;

    Ok(MetricsReport {
        ink_ratio,
        ink_ratio_without_vertices,
        distortion_mean: dist.mean,
        distortion_median: dist.median,
        distortion_per_edge: dist.per_edge,
        amb: amb.amb,
        ambiguous_pairs: amb.detection.pairs.len(),
        grid_cols: amb.detection.cols,
        grid_rows: amb.detection.rows,
        ambiguity_cell_counts: amb.detection.cell_counts,
    })
}
