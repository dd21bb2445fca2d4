//! Evaluate a cubic, sample it, measure it and simplify a noisy polyline.

use bezier_glyph::geometry::{
    arc_length, evaluate_curve, rdp_simplify, reverse_curve, sample_uniform, tangent_at, BezierCurve, Point2,
    Polyline, DEFAULT_ARC_SEGMENTS,
};

fn main() {
    let s_curve = BezierCurve::new(vec![
        Point2::new(0.1, 0.1),
        Point2::new(0.9, 0.2),
        Point2::new(0.1, 0.8),
        Point2::new(0.9, 0.9),
    ])
    .expect("four finite control points");

    let mid = evaluate_curve(&s_curve, 0.5).unwrap();
    let dir = tangent_at(&s_curve, 0.5).unwrap();
    println!("c(0.5) = ({:.4}, {:.4}), unit tangent ({:.4}, {:.4})", mid.x, mid.y, dir.dx, dir.dy);
    println!("arc length ~ {:.5}", arc_length(&s_curve, DEFAULT_ARC_SEGMENTS));

    for (p, t) in sample_uniform(&s_curve, 5).unwrap() {
        println!("  sample ({:.3}, {:.3}) tangent ({:+.3}, {:+.3})", p.x, p.y, t.dx, t.dy);
    }

    let back = reverse_curve(&s_curve);
    assert_eq!(back.start(), s_curve.end());

    // A wobbly horizontal trace collapses to its two ends.
    let trace: Vec<Point2> = (0..=40)
        .map(|i| Point2::new(i as f64, if i % 2 == 0 { 0.0 } else { 0.4 }))
        .collect();
    let line = Polyline::new(trace).unwrap();
    let simple = rdp_simplify(&line, 1.0);
    println!("rdp: {} vertices -> {}", line.len(), simple.len());
}

#[cfg(test)]
#[test]
fn example_runs() {
    main();
}
