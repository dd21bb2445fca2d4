//! Render a program, vectorize the image again and score the result.

use bezier_glyph::extraction::{extract_glyph, ExtractionConfig};
use bezier_glyph::geometry::{normalize_to_unit_box, BezierCurve, Point2, StrokeSequence};
use bezier_glyph::metrics::{geometric_score, MetricConfig};
use bezier_glyph::rendering::rasterize_strokes;

fn main() {
    let source = normalize_to_unit_box(&StrokeSequence::normalized(vec![
        BezierCurve::line(Point2::new(0.1, 0.85), Point2::new(0.9, 0.85)),
        BezierCurve::new(vec![Point2::new(0.15, 0.6), Point2::new(0.5, 0.2), Point2::new(0.85, 0.6)]).unwrap(),
        BezierCurve::line(Point2::new(0.1, 0.1), Point2::new(0.9, 0.15)),
    ]));
    let image = rasterize_strokes(&source, (512, 512), 3.0).unwrap().to_raster();
    let recovered = extract_glyph(&image, &ExtractionConfig::default()).unwrap();
    let report = geometric_score(&source, &recovered, &MetricConfig::default()).unwrap();
    println!(
        "{} strokes in, {} out; base {:.4}, G {:.4} (D {:.4}, A {:.4}, L {:.4})",
        source.len(),
        recovered.len(),
        report.base_geometric,
        report.geometric,
        report.distance,
        report.angle,
        report.length
    );
}

#[cfg(test)]
#[test]
fn example_runs() {
    main();
}
