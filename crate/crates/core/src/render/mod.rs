//! SVG and raster presentation outputs. Everything is drawn in the same
//! pixel frame the metrics rasterize in, so images of one dataset line up.

mod colormap;

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use colormap::{angle_color, cyclic, sequential, sequential_color, Rgb, PALETTE_SIZE};

use crate::drawing::Drawing;
use crate::error::{Error, Result};
use crate::metrics::{distortion, Frame, RasterImage, RasterStyle};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ColorMode {
    #[default]
    Plain,
    AngleColormap,
    DistortionColormap,
}

impl FromStr for ColorMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "plain" => Ok(Self::Plain),
            "angle" | "angle-colormap" => Ok(Self::AngleColormap),
            "distortion" | "distortion-colormap" => Ok(Self::DistortionColormap),
            other => Err(format!("unknown colour mode `{other}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Background {
    #[default]
    White,
    Black,
}

impl Background {
    fn fill(self) -> Rgb {
        match self {
            Background::White => Rgb::WHITE,
            Background::Black => Rgb::BLACK,
        }
    }

    fn ink(self) -> Rgb {
        match self {
            Background::White => Rgb::BLACK,
            Background::Black => Rgb::WHITE,
        }
    }
}

impl FromStr for Background {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "white" => Ok(Self::White),
            "black" => Ok(Self::Black),
            other => Err(format!("unknown background `{other}`")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RenderStyle {
    pub width_px: usize,
    pub line_width_px: f64,
    pub vertex_diameter_px: f64,
    pub mode: ColorMode,
    pub background: Background,
}

impl Default for RenderStyle {
    fn default() -> Self {
        Self {
            width_px: 1600,
            line_width_px: 1.0,
            vertex_diameter_px: 4.0,
            mode: ColorMode::Plain,
            background: Background::White,
        }
    }
}

impl RenderStyle {
    /// Raster settings with the same geometry, used to share frames.
    pub fn raster(&self) -> RasterStyle {
        RasterStyle {
            width_px: self.width_px,
            line_width_px: self.line_width_px,
            vertex_diameter_px: self.vertex_diameter_px,
            draw_vertices: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.raster().validate()
    }

    pub fn frame_for<'a>(&self, drawings: impl IntoIterator<Item = &'a Drawing>) -> Result<Frame> {
        Frame::for_drawings(drawings, &self.raster())
    }
}

/// SVG of `drawing` in its own frame.
pub fn render_svg(drawing: &Drawing, style: &RenderStyle) -> Result<String> {
    let frame = style.frame_for([drawing])?;
    let colors = match style.mode {
        ColorMode::DistortionColormap => Some(distortion_colors(&[drawing])?.remove(0)),
        _ => None,
    };
    render_svg_in_frame(drawing, &frame, style, colors.as_deref())
}

/// SVG of `drawing` in `frame`. `edge_colors`, when given, overrides the
/// style's colour mode per edge.
pub fn render_svg_in_frame(
    drawing: &Drawing,
    frame: &Frame,
    style: &RenderStyle,
    edge_colors: Option<&[Rgb]>,
) -> Result<String> {
    style.validate()?;
    if let Some(c) = edge_colors {
        if c.len() != drawing.edges.len() {
            return Err(Error::InvalidParameter(format!(
                "{} edge colours for {} edges",
                c.len(),
                drawing.edges.len()
            )));
        }
    }
    if style.mode == ColorMode::DistortionColormap && edge_colors.is_none() {
        return Err(Error::InvalidParameter(
            "distortion colouring needs per-edge colours".into(),
        ));
    }
    let ink = style.background.ink();
    let mut svg = String::new();
    // write! into a String cannot fail
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = frame.width,
        h = frame.height
    );
    let _ = writeln!(
        svg,
        r#"<rect width="100%" height="100%" fill="{}"/>"#,
        style.background.fill().hex()
    );
    let _ = writeln!(
        svg,
        r#"<g fill="none" stroke-width="{}" stroke-linecap="round" stroke-linejoin="round">"#,
        style.line_width_px
    );
    for (i, e) in drawing.edges.iter().enumerate() {
        let color = match (edge_colors, style.mode) {
            (Some(c), _) => c[i],
            (None, ColorMode::AngleColormap) => angle_color(drawing.straight_direction(i), drawing.directed),
            _ => ink,
        };
        let mut d = String::new();
        for (k, p) in e.polyline.iter().enumerate() {
            let q = frame.to_pixel(*p);
            let _ = write!(d, "{}{:.3} {:.3}", if k == 0 { "M" } else { " L" }, q.x, q.y);
        }
        let _ = writeln!(svg, r#"<path id="e{i}" stroke="{}" d="{d}"/>"#, color.hex());
    }
    let _ = writeln!(svg, "</g>");
    if style.vertex_diameter_px > 0.0 {
        let _ = writeln!(svg, r#"<g fill="{}">"#, ink.hex());
        let r = style.vertex_diameter_px / 2.0;
        for (v, p) in drawing.vertices.iter().enumerate() {
            let q = frame.to_pixel(*p);
            let _ = writeln!(svg, r#"<circle id="v{v}" cx="{:.3}" cy="{:.3}" r="{r}"/>"#, q.x, q.y);
        }
        let _ = writeln!(svg, "</g>");
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Per-edge sequential colours for each drawing, normalized by the minimum
/// and maximum distortion over all of them.
pub fn distortion_colors(drawings: &[&Drawing]) -> Result<Vec<Vec<Rgb>>> {
    let per: Vec<Vec<f64>> = drawings
        .iter()
        .map(|d| distortion(d).map(|s| s.per_edge))
        .collect::<Result<_>>()?;
    let (min, max) = per
        .iter()
        .flatten()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    Ok(per
        .iter()
        .map(|vals| vals.iter().map(|&v| sequential_color(v, min, max)).collect())
        .collect())
}

/// One distortion-coloured SVG per drawing, in a frame shared by all of them.
pub fn distortion_heatmap(drawings: &[&Drawing], style: &RenderStyle) -> Result<Vec<String>> {
    if drawings.is_empty() {
        return Err(Error::InvalidParameter("no drawings to compare".into()));
    }
    let frame = style.frame_for(drawings.iter().copied())?;
    let colors = distortion_colors(drawings)?;
    let style = RenderStyle {
        mode: ColorMode::DistortionColormap,
        ..*style
    };
    drawings
        .iter()
        .zip(&colors)
        .map(|(d, c)| render_svg_in_frame(d, &frame, &style, Some(c)))
        .collect()
}

/// Grayscale image of per-cell ambiguity counts: each `cell_px` block gets
/// `255 * count / global_max`, cropped to `width` x `height`. A zero
/// maximum gives a black image.
pub fn ambiguity_heatmap(
    cell_counts: &[u32],
    cols: usize,
    rows: usize,
    cell_px: usize,
    width: usize,
    height: usize,
    global_max: u32,
) -> Result<RasterImage> {
    if cell_counts.len() != cols * rows {
        return Err(Error::DimensionMismatch(cell_counts.len(), cols * rows, cols, rows));
    }
    if cell_counts.iter().any(|&c| c > global_max) {
        return Err(Error::InvalidParameter(
            "global maximum is below a cell count".into(),
        ));
    }
    let mut img = RasterImage::blank(width, height);
    if global_max == 0 || cell_px == 0 {
        return Ok(img);
    }
    for y in 0..height {
        let r = (y / cell_px).min(rows.saturating_sub(1));
        for x in 0..width {
            let c = (x / cell_px).min(cols.saturating_sub(1));
            let count = cell_counts[r * cols + c] as u64;
            img.pixels[y * width + x] = ((255 * count + global_max as u64 / 2) / global_max as u64) as u8;
        }
    }
    Ok(img)
}
