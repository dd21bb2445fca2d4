//! Geometric Score of a perturbed reconstruction, with sub-scores.

use bezier_glyph::geometry::{reverse_curve, BezierCurve, Point2, StrokeSequence};
use bezier_glyph::metrics::{composite_similarity, geometric_score, MetricConfig};

fn line(a: (f64, f64), b: (f64, f64)) -> BezierCurve {
    BezierCurve::line(Point2::new(a.0, a.1), Point2::new(b.0, b.1))
}

fn main() {
    let config = MetricConfig::default();
    let gt = StrokeSequence::normalized(vec![
        line((0.1, 0.8), (0.9, 0.8)),
        line((0.5, 0.8), (0.5, 0.1)),
        BezierCurve::new(vec![Point2::new(0.2, 0.4), Point2::new(0.5, 0.2), Point2::new(0.8, 0.4)]).unwrap(),
    ]);

    // Reordered, one stroke drawn backwards, one nudged, plus a stray mark.
    let gen = StrokeSequence::normalized(vec![
        line((0.52, 0.78), (0.5, 0.12)),
        reverse_curve(&gt.strokes[0]),
        gt.strokes[2].clone(),
        line((0.05, 0.05), (0.1, 0.1)),
    ]);

    let report = geometric_score(&gt, &gen, &config).unwrap();
    println!("{}", serde_json::to_string_pretty(&report).unwrap());

    let offset = composite_similarity(&line((0.0, 0.0), (1.0, 0.0)), &line((0.0, 0.5), (1.0, 0.5)), &config);
    println!("offset parallel line composite = {offset:.4}");
}

#[cfg(test)]
#[test]
fn example_runs() {
    main();
}
