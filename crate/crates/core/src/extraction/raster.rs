use std::io::Cursor;

use image::{ImageBuffer, Luma};

use crate::error::{precondition, Error, Result};

use super::{ExtractionConfig, Threshold};

/// Row-major 8-bit grayscale image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RasterImage {
    width: u32,
    height: u32,
    pixels: Vec<u8>,
}

impl RasterImage {
    pub fn new(width: u32, height: u32, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(precondition("image dimensions must be at least 1x1"));
        }
        if pixels.len() != width as usize * height as usize {
            return Err(precondition(format!(
                "expected {} pixels for {width}x{height}, got {}",
                width as usize * height as usize,
                pixels.len()
            )));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// A uniformly filled image.
    pub fn filled(width: u32, height: u32, value: u8) -> Result<Self> {
        Self::new(width, height, vec![value; width as usize * height as usize])
    }

    /// Decodes PNG or binary PGM bytes into luminance.
    pub fn decode(bytes: &[u8]) -> Result<Self> {
        let img = image::load_from_memory(bytes).map_err(|e| Error::Image(e.to_string()))?;
        let gray = img.to_luma8();
        let (w, h) = gray.dimensions();
        Self::new(w, h, gray.into_raw())
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

    pub fn set(&mut self, x: u32, y: u32, value: u8) {
        self.pixels[y as usize * self.width as usize + x as usize] = value;
    }

    pub fn to_png(&self) -> Result<Vec<u8>> {
        encode_gray(self.width, self.height, &self.pixels, image::ImageFormat::Png)
    }

    pub fn to_pgm(&self) -> Result<Vec<u8>> {
        encode_pgm(self.width, self.height, &self.pixels)
    }
}

pub(crate) fn encode_gray(
    width: u32,
    height: u32,
    pixels: &[u8],
    format: image::ImageFormat,
) -> Result<Vec<u8>> {
    let buf: ImageBuffer<Luma<u8>, &[u8]> = ImageBuffer::from_raw(width, height, pixels)
        .ok_or_else(|| precondition("pixel buffer does not match dimensions"))?;
    let mut out = Cursor::new(Vec::new());
    buf.write_to(&mut out, format)
        .map_err(|e| Error::Image(e.to_string()))?;
    Ok(out.into_inner())
}

pub(crate) fn encode_pgm(width: u32, height: u32, pixels: &[u8]) -> Result<Vec<u8>> {
    use image::codecs::pnm::{PnmEncoder, PnmSubtype, SampleEncoding};
    use image::ImageEncoder;

    let mut out = Vec::new();
    PnmEncoder::new(&mut out)
        .with_subtype(PnmSubtype::Graymap(SampleEncoding::Binary))
        .write_image(pixels, width, height, image::ExtendedColorType::L8)
        .map_err(|e| Error::Image(e.to_string()))?;
    Ok(out)
}

/// Row-major foreground mask; `true` is glyph ink.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryImage {
    width: u32,
    height: u32,
    bits: Vec<bool>,
}

impl BinaryImage {
    pub fn new(width: u32, height: u32, bits: Vec<bool>) -> Result<Self> {
        if width == 0 || height == 0 || bits.len() != width as usize * height as usize {
            return Err(precondition("mask dimensions do not match bit count"));
        }
        Ok(Self {
            width,
            height,
            bits,
        })
    }

    pub fn empty(width: u32, height: u32) -> Self {
        Self::new(width, height, vec![false; width as usize * height as usize])
            .expect("non-zero dimensions")
    }

    /// Builds a mask from rows of `#` (ink) and any other character.
    pub fn from_ascii(rows: &[&str]) -> Self {
        let height = rows.len() as u32;
        let width = rows.iter().map(|r| r.len()).max().unwrap_or(0) as u32;
        let mut img = Self::empty(width.max(1), height.max(1));
        for (y, row) in rows.iter().enumerate() {
            for (x, c) in row.bytes().enumerate() {
                if c == b'#' {
                    img.set(x as u32, y as u32, true);
                }
            }
        }
        img
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn get(&self, x: u32, y: u32) -> bool {
        self.bits[y as usize * self.width as usize + x as usize]
    }

    /// Out-of-bounds coordinates read as background.
    pub fn get_signed(&self, x: i64, y: i64) -> bool {
        x >= 0
            && y >= 0
            && x < self.width as i64
            && y < self.height as i64
            && self.bits[y as usize * self.width as usize + x as usize]
    }

    pub fn set(&mut self, x: u32, y: u32, value: bool) {
        self.bits[y as usize * self.width as usize + x as usize] = value;
    }

    pub fn count_foreground(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Foreground coordinates in row-major order.
    pub fn foreground(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        let w = self.width as usize;
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| ((i % w) as u32, (i / w) as u32))
    }

    pub fn to_ascii(&self) -> Vec<String> {
        (0..self.height)
            .map(|y| {
                (0..self.width)
                    .map(|x| if self.get(x, y) { '#' } else { '.' })
                    .collect()
            })
            .collect()
    }
}

/// Otsu's threshold: the smallest `T` such that classifying `v < T` as
/// foreground maximizes between-class variance. Uniform images yield 0.
pub fn otsu_threshold(image: &RasterImage) -> u8 {
    let mut hist = [0u64; 256];
    for &v in image.pixels() {
        hist[v as usize] += 1;
    }
    let total = image.pixels().len() as f64;
    let sum_all: f64 = hist.iter().enumerate().map(|(v, &c)| v as f64 * c as f64).sum();

    let mut best_t: Option<usize> = None;
    let mut best_var = 0.0;
    let mut w0 = 0.0;
    let mut sum0 = 0.0;
    for (t, &count) in hist.iter().enumerate().take(255) {
        w0 += count as f64;
        sum0 += t as f64 * count as f64;
        let w1 = total - w0;
        if w0 == 0.0 || w1 == 0.0 {
            continue;
        }
        let mu0 = sum0 / w0;
        let mu1 = (sum_all - sum0) / w1;
        let var = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
        if var > best_var {
            best_var = var;
            best_t = Some(t);
        }
    }
    best_t.map_or(0, |t| (t + 1) as u8)
}

/// Separates glyph ink from background.
///
/// Pixels darker than the threshold are foreground. If that selects more
/// than half the image the polarity is flipped (light glyph on dark field).
pub fn binarize(image: &RasterImage, config: &ExtractionConfig) -> Result<BinaryImage> {
    let threshold = match config.binarize_threshold {
        Threshold::Fixed(t) => t,
        Threshold::Otsu => otsu_threshold(image),
    };
    let mut bits: Vec<bool> = image.pixels().iter().map(|&v| v < threshold).collect();
    let fg = bits.iter().filter(|&&b| b).count();
    if fg * 2 > bits.len() {
        bits.iter_mut().for_each(|b| *b = !*b);
    }
    let mask = BinaryImage::new(image.width(), image.height(), bits)?;
    if mask.count_foreground() == 0 {
        return Err(Error::EmptyGlyph);
    }
    Ok(mask)
}
