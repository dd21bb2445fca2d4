//! Raster-to-Bézier extraction.
//!
//! The pipeline binarizes a grayscale glyph, thins it to a one-pixel
//! skeleton, segments the 8-connected skeleton graph into paths at
//! junctions and endpoints, simplifies each path, merges aligned paths into
//! strokes, fits a low-degree Bézier curve to each stroke and finally
//! letterboxes the result into the unit square with y pointing up.

mod fit;
mod graph;
mod merge;
mod raster;
mod skeleton;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{precondition, Result};
use crate::geometry::{letterbox, rdp_simplify, Point2, Polyline, StrokeSequence};

pub use fit::{chord_parameters, fit_polyline, fit_strokes, FittedSpan};
pub use graph::{build_pixel_graph, segment_paths, PixelPath, Pixel, Segmentation, SkeletonGraph};
pub use merge::merge_paths;
pub use raster::{binarize, otsu_threshold, BinaryImage, RasterImage};
pub(crate) use raster::{encode_gray, encode_pgm};
pub use skeleton::{count_components, skeletonize};

/// How grayscale luminance is split into ink and paper.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Threshold {
    Otsu,
    /// Pixels strictly darker than this value are ink.
    Fixed(u8),
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Otsu => f.write_str("otsu"),
            Threshold::Fixed(t) => write!(f, "{t}"),
        }
    }
}

impl FromStr for Threshold {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("otsu") {
            return Ok(Threshold::Otsu);
        }
        match s.parse::<u16>() {
            Ok(v) if (1..=255).contains(&v) => Ok(Threshold::Fixed(v as u8)),
            _ => Err(format!("threshold must be `otsu` or 1..=255, got `{s}`")),
        }
    }
}

/// Free parameters of the extraction pipeline. Distances are in pixels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractionConfig {
    pub binarize_threshold: Threshold,
    /// RDP tolerance applied to each skeleton path.
    pub rdp_epsilon: f64,
    /// Largest gap between path ends that may still be merged.
    pub merge_gap: f64,
    /// Merged paths must turn by less than this many degrees.
    pub merge_angle: f64,
    /// Junction spurs shorter than this are pruned.
    pub min_path_pixels: usize,
    /// Max residual of a fitted curve against its polyline vertices.
    pub fit_tolerance: f64,
}

impl Default for ExtractionConfig {
    fn default() -> Self {
        Self {
            binarize_threshold: Threshold::Otsu,
            rdp_epsilon: 2.0,
            merge_gap: 3.0,
            merge_angle: 30.0,
            min_path_pixels: 4,
            fit_tolerance: 2.0,
        }
    }
}

impl ExtractionConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("rdp_epsilon", self.rdp_epsilon),
            ("merge_gap", self.merge_gap),
            ("merge_angle", self.merge_angle),
            ("fit_tolerance", self.fit_tolerance),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(precondition(format!("{name} must be positive, got {v}")));
            }
        }
        if self.min_path_pixels == 0 {
            return Err(precondition("min_path_pixels must be positive"));
        }
        Ok(())
    }
}

/// Every intermediate product of one extraction run.
#[derive(Debug, Clone)]
pub struct ExtractionTrace {
    pub binary: BinaryImage,
    pub skeleton: BinaryImage,
    pub graph: SkeletonGraph,
    pub segmentation: Segmentation,
    /// Simplified paths in pixel coordinates, before merging.
    pub simplified: Vec<Polyline>,
    /// Merged strokes in pixel coordinates.
    pub merged: Vec<Polyline>,
    /// Fitted curves in pixel coordinates.
    pub pixel_strokes: StrokeSequence,
    pub strokes: StrokeSequence,
}

/// Junctions joined by pruned junction-to-junction connectors form one
/// cluster; path ends at a clustered junction snap to the cluster centroid.
fn junction_centroids(graph: &SkeletonGraph, seg: &Segmentation) -> BTreeMap<Pixel, Point2> {
    let mut parent: BTreeMap<Pixel, Pixel> = BTreeMap::new();
    fn find(parent: &mut BTreeMap<Pixel, Pixel>, p: Pixel) -> Pixel {
        let q = *parent.entry(p).or_insert(p);
        if q == p {
            p
        } else {
            let root = find(parent, q);
            parent.insert(p, root);
            root
        }
    }
    for path in &seg.discarded {
        let (a, b) = (path.first(), path.last());
        if a != b && graph.degree(a) >= 3 && graph.degree(b) >= 3 {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
                parent.insert(hi, lo);
            }
        }
    }
    let members: Vec<Pixel> = parent.keys().copied().collect();
    let mut groups: BTreeMap<Pixel, Vec<Pixel>> = BTreeMap::new();
    for p in members {
        let root = find(&mut parent, p);
        groups.entry(root).or_default().push(p);
    }
    let mut out = BTreeMap::new();
    for group in groups.values() {
        let n = group.len() as f64;
        let cx = group.iter().map(|p| p.x as f64).sum::<f64>() / n;
        let cy = group.iter().map(|p| p.y as f64).sum::<f64>() / n;
        for &p in group {
            out.insert(p, Point2::new(cx, cy));
        }
    }
    out
}

fn path_to_polyline(path: &PixelPath, snap: &BTreeMap<Pixel, Point2>) -> Option<Polyline> {
    let last = path.len() - 1;
    let points = path
        .pixels
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let own = Point2::new(p.x as f64, p.y as f64);
            if i == 0 || i == last {
                snap.get(&p).copied().unwrap_or(own)
            } else {
                own
            }
        })
        .collect();
    Polyline::from_points_dedup(points).ok()
}

/// Runs the full pipeline and keeps every intermediate stage.
pub fn extract_glyph_traced(image: &RasterImage, config: &ExtractionConfig) -> Result<ExtractionTrace> {
    config.validate()?;
    let binary = binarize(image, config)?;
    let skeleton = skeletonize(&binary);
    let graph = build_pixel_graph(&skeleton);
    let segmentation = segment_paths(&graph, config.min_path_pixels);
    let snap = junction_centroids(&graph, &segmentation);

    let simplified: Vec<Polyline> = segmentation
        .paths
        .iter()
        .filter_map(|p| path_to_polyline(p, &snap))
        .map(|p| rdp_simplify(&p, config.rdp_epsilon))
        .collect();
    let merged = merge_paths(simplified.clone(), config);
    let curves = fit_strokes(&merged, config);

    let pixel_strokes = StrokeSequence {
        strokes: curves,
        space: crate::geometry::CoordinateSpace::Pixel {
            width: image.width(),
            height: image.height(),
        },
    };
    let strokes = match pixel_strokes.control_bounds() {
        Some(bounds) => {
            let map = letterbox(bounds, true);
            StrokeSequence::normalized(
                pixel_strokes
                    .strokes
                    .iter()
                    .map(|c| c.map_points(&map))
                    .collect(),
            )
        }
        None => StrokeSequence::empty(),
    };

    Ok(ExtractionTrace {
        binary,
        skeleton,
        graph,
        segmentation,
        simplified,
        merged,
        pixel_strokes,
        strokes,
    })
}

/// Converts a grayscale glyph image into a normalized stroke program.
pub fn extract_glyph(image: &RasterImage, config: &ExtractionConfig) -> Result<StrokeSequence> {
    extract_glyph_traced(image, config).map(|t| t.strokes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn canvas_with(w: u32, h: u32, ink: impl Fn(u32, u32) -> bool) -> RasterImage {
        let mut img = RasterImage::filled(w, h, 255).unwrap();
        for y in 0..h {
            for x in 0..w {
                if ink(x, y) {
                    img.set(x, y, 0);
                }
            }
        }
        img
    }

    #[test]
    fn horizontal_bar_is_one_line() {
        let img = canvas_with(120, 60, |x, y| (10..110).contains(&x) && (27..33).contains(&y));
        let seq = extract_glyph(&img, &ExtractionConfig::default()).unwrap();
        assert_eq!(seq.len(), 1, "{seq:?}");
        let c = &seq.strokes[0];
        assert_eq!(c.degree(), 1);
        assert!((c.start().x - 0.05).abs() < 0.05 && (c.start().y - 0.5).abs() < 0.05);
        assert!((c.end().x - 0.95).abs() < 0.05 && (c.end().y - 0.5).abs() < 0.05);
    }

    #[test]
    fn plus_sign_is_two_strokes() {
        let img = canvas_with(100, 100, |x, y| {
            ((10..90).contains(&x) && (46..54).contains(&y))
                || ((10..90).contains(&y) && (46..54).contains(&x))
        });
        let seq = extract_glyph(&img, &ExtractionConfig::default()).unwrap();
        assert_eq!(seq.len(), 2, "{seq:?}");
        let horizontal = seq
            .strokes
            .iter()
            .filter(|c| (c.start().y - c.end().y).abs() < 0.1)
            .count();
        assert_eq!(horizontal, 1);
    }

    #[test]
    fn blank_image_fails() {
        let img = RasterImage::filled(32, 32, 255).unwrap();
        assert_eq!(
            extract_glyph(&img, &ExtractionConfig::default()),
            Err(Error::EmptyGlyph)
        );
    }

    #[test]
    fn y_axis_points_up() {
        // A vertical bar whose top is row 10: the stroke's upper end is near y = 0.95.
        let img = canvas_with(60, 100, |x, y| (28..33).contains(&x) && (10..90).contains(&y));
        let seq = extract_glyph(&img, &ExtractionConfig::default()).unwrap();
        assert_eq!(seq.len(), 1);
        let c = &seq.strokes[0];
        let top = if c.start().y > c.end().y { c.start() } else { c.end() };
        assert!(top.y > 0.9, "{seq:?}");
    }

    #[test]
    fn threshold_parsing() {
        assert_eq!("otsu".parse::<Threshold>(), Ok(Threshold::Otsu));
        assert_eq!("128".parse::<Threshold>(), Ok(Threshold::Fixed(128)));
        assert!("0".parse::<Threshold>().is_err());
        assert!("300".parse::<Threshold>().is_err());
    }

    #[test]
    fn config_validation() {
        let bad = ExtractionConfig {
            rdp_epsilon: 0.0,
            ..ExtractionConfig::default()
        };
        assert!(bad.validate().is_err());
        assert!(ExtractionConfig::default().validate().is_ok());
    }
}
