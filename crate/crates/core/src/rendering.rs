//! Stroke rasterization and the axis-overlay prompt image.

use serde::{Deserialize, Serialize};

use crate::error::{precondition, Result};
use crate::extraction::{encode_gray, encode_pgm, RasterImage};
use crate::geometry::{BezierCurve, Point2, StrokeSequence};

pub const MIN_CANVAS_SIZE: u32 = 16;
const WHITE: u8 = 255;
const INK: u8 = 0;

/// White-background 8-bit grayscale drawing surface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Canvas {
    width: u32,
    height: u32,
    pixels: Vec<u8>,
}

impl Canvas {
    pub fn new(width: u32, height: u32) -> Result<Self> {
        if width < MIN_CANVAS_SIZE || height < MIN_CANVAS_SIZE {
            return Err(precondition(format!(
                "canvas must be at least {MIN_CANVAS_SIZE}x{MIN_CANVAS_SIZE}, got {width}x{height}"
            )));
        }
        Ok(Self {
            width,
            height,
            pixels: vec![WHITE; width as usize * height as usize],
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, x: u32, y: u32) -> u8 {
        self.pixels[y as usize * self.width as usize + x as usize]
    }

    /// Darkens a pixel; coordinates outside the canvas are ignored.
    pub fn ink(&mut self, x: i64, y: i64, value: u8) {
        if x >= 0 && y >= 0 && (x as u32) < self.width && (y as u32) < self.height {
            let i = y as usize * self.width as usize + x as usize;
            self.pixels[i] = self.pixels[i].min(value);
        }
    }

    pub fn ink_count(&self) -> usize {
        self.pixels.iter().filter(|&&v| v < WHITE).count()
    }

    pub fn to_png(&self) -> Result<Vec<u8>> {
        encode_gray(self.width, self.height, &self.pixels, image::ImageFormat::Png)
    }

    pub fn to_pgm(&self) -> Result<Vec<u8>> {
        encode_pgm(self.width, self.height, &self.pixels)
    }

    pub fn to_raster(&self) -> RasterImage {
        RasterImage::new(self.width, self.height, self.pixels.clone()).expect("canvas dimensions are valid")
    }

    pub fn from_raster(image: &RasterImage) -> Result<Self> {
        let mut c = Self::new(image.width(), image.height())?;
        c.pixels.copy_from_slice(image.pixels());
        Ok(c)
    }
}

/// Inclusive pixel rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PixelRect {
    pub left: u32,
    pub top: u32,
    pub right: u32,
    pub bottom: u32,
}

impl PixelRect {
    pub fn contains(&self, x: u32, y: u32) -> bool {
        (self.left..=self.right).contains(&x) && (self.top..=self.bottom).contains(&y)
    }

    /// Pixel position of a normalized point, y up.
    pub fn map(&self, p: Point2) -> (f64, f64) {
        let w = (self.right - self.left) as f64;
        let h = (self.bottom - self.top) as f64;
        (self.left as f64 + p.x * w, self.top as f64 + (1.0 - p.y) * h)
    }
}

fn stamp_disc(canvas: &mut Canvas, cx: f64, cy: f64, radius: f64, clip: PixelRect) {
    let r = radius.max(0.5);
    let (x0, x1) = ((cx - r).floor() as i64, (cx + r).ceil() as i64);
    let (y0, y1) = ((cy - r).floor() as i64, (cy + r).ceil() as i64);
    for y in y0..=y1 {
        for x in x0..=x1 {
            let (dx, dy) = (x as f64 - cx, y as f64 - cy);
            if dx * dx + dy * dy <= r * r
                && x >= clip.left as i64
                && x <= clip.right as i64
                && y >= clip.top as i64
                && y <= clip.bottom as i64
            {
                canvas.ink(x, y, INK);
            }
        }
    }
}

fn draw_curve(canvas: &mut Canvas, curve: &BezierCurve, region: PixelRect, width_px: f64) {
    let steps = 4 * canvas.width.max(canvas.height) as usize;
    for i in 0..=steps {
        let (x, y) = region.map(curve.point_at(i as f64 / steps as f64));
        stamp_disc(canvas, x, y, width_px / 2.0, region);
    }
}

fn full_rect(canvas: &Canvas) -> PixelRect {
    PixelRect {
        left: 0,
        top: 0,
        right: canvas.width - 1,
        bottom: canvas.height - 1,
    }
}

/// Draws each curve as black ink of the given width, mapping the unit
/// square onto pixel centers with y flipped to raster orientation.
pub fn rasterize_strokes(sequence: &StrokeSequence, size: (u32, u32), stroke_width_px: f64) -> Result<Canvas> {
    sequence.require_normalized()?;
    if !(stroke_width_px.is_finite() && stroke_width_px > 0.0) {
        return Err(precondition("stroke width must be positive"));
    }
    let mut canvas = Canvas::new(size.0, size.1)?;
    let region = full_rect(&canvas);
    for curve in &sequence.strokes {
        draw_curve(&mut canvas, curve, region, stroke_width_px);
    }
    Ok(canvas)
}

/// Layout knobs of the coordinate-axis overlay.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisOverlayConfig {
    /// Fraction of the shorter canvas side reserved for the axes and labels.
    pub margin_frac: f64,
    /// Tick spacing in normalized units.
    pub tick_step: f64,
    pub label_decimals: usize,
    pub glyph_stroke_px: f64,
    /// Output canvas side length.
    pub size: u32,
}

impl Default for AxisOverlayConfig {
    fn default() -> Self {
        Self {
            margin_frac: 0.12,
            tick_step: 0.1,
            label_decimals: 1,
            glyph_stroke_px: 3.0,
            size: 512,
        }
    }
}

impl AxisOverlayConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tick_step > 0.0 && self.tick_step <= 0.5) {
            return Err(precondition(format!("tick_step must be in (0, 0.5], got {}", self.tick_step)));
        }
        if !(self.margin_frac > 0.0 && self.margin_frac < 0.4) {
            return Err(precondition(format!("margin_frac must be in (0, 0.4), got {}", self.margin_frac)));
        }
        if !(self.glyph_stroke_px.is_finite() && self.glyph_stroke_px > 0.0) {
            return Err(precondition("glyph_stroke_px must be positive"));
        }
        if self.label_decimals > 6 {
            return Err(precondition("label_decimals must be at most 6"));
        }
        if self.size < 64 {
            return Err(precondition("overlay size must be at least 64"));
        }
        Ok(())
    }
}

/// Where everything lands on an overlay canvas.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlayLayout {
    /// Region the unit square maps onto; glyph ink never leaves it.
    pub plot: PixelRect,
    /// Row of the x-axis line.
    pub x_axis_row: u32,
    /// Column of the y-axis line.
    pub y_axis_col: u32,
    /// `(value, column)` of each x tick.
    pub x_ticks: Vec<(f64, u32)>,
    /// `(value, row)` of each y tick.
    pub y_ticks: Vec<(f64, u32)>,
    pub tick_len: u32,
    pub font_scale: u32,
}

pub fn overlay_layout(config: &AxisOverlayConfig) -> Result<OverlayLayout> {
    config.validate()?;
    let size = config.size;
    let margin = ((config.margin_frac * size as f64).round() as u32).max(12);
    let widest = label(1.0, config.label_decimals);
    let plot_guess = (size - margin) as f64 * (1.0 - 0.25 * config.margin_frac);
    let spacing = plot_guess * config.tick_step;
    let mut font_scale = (margin / 28).max(1);
    while font_scale > 1 && text_extent(&widest, font_scale).0 as f64 + 4.0 > spacing {
        font_scale -= 1;
    }
    let (label_w, label_h) = text_extent(&widest, font_scale);
    let pad_right = (margin / 4).max(label_w / 2 + 2);
    let pad_top = (margin / 4).max(label_h / 2 + 2);
    let plot = PixelRect {
        left: margin,
        top: pad_top,
        right: size - 1 - pad_right,
        bottom: size - 1 - margin,
    };
    let count = (1.0 / config.tick_step + 1e-9).floor() as usize + 1;
    let values: Vec<f64> = (0..count).map(|k| k as f64 * config.tick_step).collect();
    let x_ticks = values
        .iter()
        .map(|&v| (v, plot.map(Point2::new(v, 0.0)).0.round() as u32))
        .collect();
    let y_ticks = values
        .iter()
        .map(|&v| (v, plot.map(Point2::new(0.0, v)).1.round() as u32))
        .collect();
    Ok(OverlayLayout {
        plot,
        x_axis_row: plot.bottom + 2,
        y_axis_col: plot.left - 2,
        x_ticks,
        y_ticks,
        tick_len: (margin / 10).max(3),
        font_scale,
    })
}

const FONT_W: i64 = 5;
const FONT_H: i64 = 7;

/// 5×7 bitmap rows, most significant of the low five bits on the left.
fn glyph_bits(c: char) -> [u8; 7] {
    match c {
        '0' => [0x0E, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0E],
        '1' => [0x04, 0x0C, 0x04, 0x04, 0x04, 0x04, 0x0E],
        '2' => [0x0E, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1F],
        '3' => [0x1F, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0E],
        '4' => [0x02, 0x06, 0x0A, 0x12, 0x1F, 0x02, 0x02],
        '5' => [0x1F, 0x10, 0x1E, 0x01, 0x01, 0x11, 0x0E],
        '6' => [0x06, 0x08, 0x10, 0x1E, 0x11, 0x11, 0x0E],
        '7' => [0x1F, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08],
        '8' => [0x0E, 0x11, 0x11, 0x0E, 0x11, 0x11, 0x0E],
        '9' => [0x0E, 0x11, 0x11, 0x0F, 0x01, 0x02, 0x0C],
        '.' => [0x00, 0x00, 0x00, 0x00, 0x00, 0x0C, 0x0C],
        '-' => [0x00, 0x00, 0x00, 0x1F, 0x00, 0x00, 0x00],
        _ => [0; 7],
    }
}

/// Pixel size of `text` at the given scale.
pub fn text_extent(text: &str, scale: u32) -> (u32, u32) {
    let n = text.chars().count() as u32;
    let s = scale;
    ((n * (FONT_W as u32 + 1)).saturating_sub(1) * s, FONT_H as u32 * s)
}

/// Draws `text` with its top-left corner at `(x, y)`.
pub fn draw_text(canvas: &mut Canvas, text: &str, x: i64, y: i64, scale: u32) {
    let s = scale as i64;
    for (k, c) in text.chars().enumerate() {
        let ox = x + k as i64 * (FONT_W + 1) * s;
        for (row, bits) in glyph_bits(c).iter().enumerate() {
            for col in 0..FONT_W {
                if bits & (1 << (FONT_W - 1 - col)) != 0 {
                    for dy in 0..s {
                        for dx in 0..s {
                            canvas.ink(ox + col * s + dx, y + row as i64 * s + dy, INK);
                        }
                    }
                }
            }
        }
    }
}

/// The glyph drawn under the axes.
#[derive(Debug, Clone, Copy)]
pub enum GlyphSource<'a> {
    Strokes(&'a StrokeSequence),
    /// A raster whose full extent is taken as the unit square.
    Image(&'a RasterImage),
}

fn label(v: f64, decimals: usize) -> String {
    format!("{:.*}", decimals, v + 0.0)
}

fn draw_axes(canvas: &mut Canvas, layout: &OverlayLayout, config: &AxisOverlayConfig) {
    let (row, col) = (layout.x_axis_row as i64, layout.y_axis_col as i64);
    let plot = layout.plot;
    for x in col..=plot.right as i64 {
        canvas.ink(x, row, INK);
    }
    for y in plot.top as i64..=row {
        canvas.ink(col, y, INK);
    }
    let s = layout.font_scale;
    let gap = 2 + layout.tick_len as i64;
    for &(v, x) in &layout.x_ticks {
        for d in 0..=layout.tick_len as i64 {
            canvas.ink(x as i64, row + d, INK);
        }
        if v > 0.0 {
            let text = label(v, config.label_decimals);
            let (w, _) = text_extent(&text, s);
            draw_text(canvas, &text, x as i64 - w as i64 / 2, row + gap, s);
        }
    }
    for &(v, y) in &layout.y_ticks {
        for d in 0..=layout.tick_len as i64 {
            canvas.ink(col - d, y as i64, INK);
        }
        if v > 0.0 {
            let text = label(v, config.label_decimals);
            let (w, h) = text_extent(&text, s);
            draw_text(canvas, &text, col - gap - w as i64, y as i64 - h as i64 / 2, s);
        }
    }
    let origin = label(0.0, config.label_decimals);
    let (w, _) = text_extent(&origin, s);
    draw_text(canvas, &origin, col - gap - w as i64, row + gap, s);
}

fn draw_image(canvas: &mut Canvas, image: &RasterImage, plot: PixelRect) {
    let pw = (plot.right - plot.left + 1) as u64;
    let ph = (plot.bottom - plot.top + 1) as u64;
    for y in plot.top..=plot.bottom {
        let sy = ((y - plot.top) as u64 * image.height() as u64 / ph) as u32;
        for x in plot.left..=plot.right {
            let sx = ((x - plot.left) as u64 * image.width() as u64 / pw) as u32;
            canvas.ink(x as i64, y as i64, image.get(sx, sy));
        }
    }
}

/// Draws the glyph inside the plot region and labeled axes along the
/// bottom and left edges.
pub fn render_axis_overlay(glyph: GlyphSource<'_>, config: &AxisOverlayConfig) -> Result<Canvas> {
    let layout = overlay_layout(config)?;
    let mut canvas = Canvas::new(config.size, config.size)?;
    match glyph {
        GlyphSource::Strokes(seq) => {
            seq.require_normalized()?;
            for curve in &seq.strokes {
                draw_curve(&mut canvas, curve, layout.plot, config.glyph_stroke_px);
            }
        }
        GlyphSource::Image(image) => draw_image(&mut canvas, image, layout.plot),
    }
    draw_axes(&mut canvas, &layout, config);
    Ok(canvas)
}
