//! Anti-aliased grayscale rasterizer. Ink is stored as high values (0 is
//! blank, 255 fully inked) and accumulates, saturating, across edges.

use serde::{Deserialize, Serialize};

use crate::drawing::Drawing;
use crate::error::{Error, Result};
use crate::geometry::{BoundingBox, Point};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RasterStyle {
    pub width_px: usize,
    pub line_width_px: f64,
    pub vertex_diameter_px: f64,
    pub draw_vertices: bool,
}

impl Default for RasterStyle {
    fn default() -> Self {
        Self {
            width_px: 1600,
            line_width_px: 1.0,
            vertex_diameter_px: 4.0,
            draw_vertices: true,
        }
    }
}

impl RasterStyle {
    /// Margin that keeps strokes and disks at the border inside the image.
    pub fn padding(&self) -> f64 {
        (self.line_width_px.max(self.vertex_diameter_px) / 2.0).ceil() + 1.0
    }

    pub fn validate(&self) -> Result<()> {
        let bad_line = self.line_width_px.is_nan() || self.line_width_px <= 0.0;
        let bad_disk = self.vertex_diameter_px.is_nan() || self.vertex_diameter_px < 0.0;
        if self.width_px == 0 || bad_line || bad_disk {
            return Err(Error::InvalidParameter("render dimensions must be positive".into()));
        }
        if self.padding() * 2.0 >= self.width_px as f64 {
            return Err(Error::InvalidParameter("image width too small for the stroke".into()));
        }
        Ok(())
    }
}

/// Uniform mapping from drawing coordinates to pixels: fixed pixel width,
/// preserved aspect ratio, y axis pointing down.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Frame {
    pub bbox: BoundingBox,
    pub scale: f64,
    pub padding: f64,
    pub width: usize,
    pub height: usize,
}

impl Frame {
    pub fn fit(bbox: BoundingBox, width_px: usize, padding: f64) -> Result<Self> {
        let extent = if bbox.width() > 0.0 { bbox.width() } else { bbox.height() };
        if extent.is_nan() || extent <= 0.0 || !extent.is_finite() {
            return Err(Error::DegenerateBoundingBox);
        }
        let scale = (width_px as f64 - 2.0 * padding) / extent;
        let height = ((bbox.height() * scale + 2.0 * padding).ceil() as usize).max(1);
        Ok(Self {
            bbox,
            scale,
            padding,
            width: width_px,
            height,
        })
    }

    /// Frame covering every drawing in `drawings`.
    pub fn for_drawings<'a>(
        drawings: impl IntoIterator<Item = &'a Drawing>,
        style: &RasterStyle,
    ) -> Result<Self> {
        let bbox = drawings
            .into_iter()
            .filter_map(Drawing::bounding_box)
            .reduce(BoundingBox::union)
            .ok_or(Error::DegenerateBoundingBox)?;
        Frame::fit(bbox, style.width_px, style.padding())
    }

    pub fn to_pixel(&self, p: Point) -> Point {
        Point::new(
            (p.x - self.bbox.min.x) * self.scale + self.padding,
            (self.bbox.max.y - p.y) * self.scale + self.padding,
        )
    }

    pub fn from_pixel(&self, p: Point) -> Point {
        Point::new(
            (p.x - self.padding) / self.scale + self.bbox.min.x,
            self.bbox.max.y - (p.y - self.padding) / self.scale,
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RasterImage {
    pub width: usize,
    pub height: usize,
    /// Row-major gray values.
    pub pixels: Vec<u8>,
}

impl RasterImage {
    pub fn blank(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            pixels: vec![0; width * height],
        }
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    /// Number of pixels with gray value `>= threshold`.
    pub fn occupied(&self, threshold: u8) -> usize {
        self.pixels.iter().filter(|&&p| p >= threshold).count()
    }

    /// Binary PGM (P5).
    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }

    pub fn to_png(&self) -> Result<Vec<u8>> {
        let mut out = Vec::new();
        {
            let mut enc = png::Encoder::new(&mut out, self.width as u32, self.height as u32);
            enc.set_color(png::ColorType::Grayscale);
            enc.set_depth(png::BitDepth::Eight);
            let mut w = enc.write_header()?;
            w.write_image_data(&self.pixels)?;
        }
        Ok(out)
    }

    /// Same image with ink shown dark on white.
    pub fn inverted(&self) -> RasterImage {
        RasterImage {
            width: self.width,
            height: self.height,
            pixels: self.pixels.iter().map(|p| 255 - p).collect(),
        }
    }
}

/// Rasterizes `drawing` in a frame fitted to its own bounding box.
pub fn rasterize(drawing: &Drawing, style: &RasterStyle) -> Result<RasterImage> {
    style.validate()?;
    let frame = Frame::for_drawings([drawing], style)?;
    Ok(rasterize_in_frame(drawing, &frame, style))
}

pub fn rasterize_in_frame(drawing: &Drawing, frame: &Frame, style: &RasterStyle) -> RasterImage {
    let mut canvas = Canvas::new(frame.width, frame.height);
    let half = style.line_width_px / 2.0;
    for e in &drawing.edges {
        let pts: Vec<Point> = e.polyline.iter().map(|&p| frame.to_pixel(p)).collect();
        for w in pts.windows(2) {
            canvas.stroke_segment(w[0], w[1], half);
        }
        canvas.commit();
    }
    if style.draw_vertices && style.vertex_diameter_px > 0.0 {
        for &v in &drawing.vertices {
            canvas.disk(frame.to_pixel(v), style.vertex_diameter_px / 2.0);
            canvas.commit();
        }
    }
    canvas.finish()
}

/// Coverage of a pixel whose centre lies `dist` from a shape edge of
/// radius `radius`, box-filtered over one pixel.
fn coverage(radius: f64, dist: f64) -> f32 {
    (radius + 0.5 - dist).clamp(0.0, 1.0) as f32
}

fn segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.x * ab.x + ab.y * ab.y;
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = (((p.x - a.x) * ab.x + (p.y - a.y) * ab.y) / len2).clamp(0.0, 1.0);
    p.distance(a + ab * t)
}

struct Canvas {
    width: usize,
    height: usize,
    ink: Vec<f32>,
    // coverage of the current shape; max-combined so joints are not doubled
    shape: Vec<f32>,
    touched: Vec<usize>,
}

impl Canvas {
    fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            ink: vec![0.0; width * height],
            shape: vec![0.0; width * height],
            touched: Vec::new(),
        }
    }

    fn mark(&mut self, x: i64, y: i64, c: f32) {
        if c <= 0.0 || x < 0 || y < 0 || x >= self.width as i64 || y >= self.height as i64 {
            return;
        }
        let i = y as usize * self.width + x as usize;
        if self.shape[i] == 0.0 {
            self.touched.push(i);
        }
        if c > self.shape[i] {
            self.shape[i] = c;
        }
    }

    fn stroke_segment(&mut self, a: Point, b: Point, half: f64) {
        let reach = half + 0.5;
        let (dx, dy) = (b.x - a.x, b.y - a.y);
        let x_major = dx.abs() >= dy.abs();
        let (ua, ub, du, dv) = if x_major {
            (a.x, b.x, dx, dy)
        } else {
            (a.y, b.y, dy, dx)
        };
        let (va, _) = if x_major { (a.y, b.y) } else { (a.x, b.x) };
        let slope = if du != 0.0 { dv / du } else { 0.0 };
        let spread = reach * (1.0 + slope * slope).sqrt() + 1.0;
        let lo = (ua.min(ub) - reach).floor() as i64;
        let hi = (ua.max(ub) + reach).floor() as i64;
        for u in lo..=hi {
            let cu = u as f64 + 0.5;
            let t = if du != 0.0 { ((cu - ua) / du).clamp(0.0, 1.0) } else { 0.0 };
            let v_mid = va + t * dv;
            let vlo = (v_mid - spread).floor() as i64;
            let vhi = (v_mid + spread).floor() as i64;
            for v in vlo..=vhi {
                let (x, y) = if x_major { (u, v) } else { (v, u) };
                let c = Point::new(x as f64 + 0.5, y as f64 + 0.5);
                self.mark(x, y, coverage(half, segment_distance(c, a, b)));
            }
        }
    }

    fn disk(&mut self, c: Point, r: f64) {
        let reach = r + 0.5;
        for y in (c.y - reach).floor() as i64..=(c.y + reach).floor() as i64 {
            for x in (c.x - reach).floor() as i64..=(c.x + reach).floor() as i64 {
                let p = Point::new(x as f64 + 0.5, y as f64 + 0.5);
                self.mark(x, y, coverage(r, p.distance(c)));
            }
        }
    }

    fn commit(&mut self) {
        for &i in &self.touched {
            self.ink[i] += 255.0 * self.shape[i];
            self.shape[i] = 0.0;
        }
        self.touched.clear();
    }

    fn finish(self) -> RasterImage {
        let pixels = self
            .ink
            .iter()
            .map(|&v| v.round().clamp(0.0, 255.0) as u8)
            .collect();
        RasterImage {
            width: self.width,
            height: self.height,
            pixels,
        }
    }
}
