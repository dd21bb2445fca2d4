mod common;

use bezier_glyph::geometry::{
    arc_length, bernstein_basis, evaluate_curve, normalize_to_unit_box, point_segment_distance, rdp_simplify,
    reverse_curve, sample_uniform, tangent_at, BezierCurve, Point2, Polyline, StrokeSequence, DEFAULT_ARC_SEGMENTS,
    LETTERBOX_MARGIN,
};
use common::in_hull;
use proptest::prelude::*;

fn point(range: f64) -> impl Strategy<Value = Point2> {
    (-range..=range, -range..=range).prop_map(|(x, y)| Point2::new(x, y))
}

fn curve() -> impl Strategy<Value = BezierCurve> {
    prop::collection::vec(point(10.0), 2..=4).prop_map(|pts| BezierCurve::new(pts).unwrap())
}

fn close(a: Point2, b: Point2, tol: f64) -> bool {
    (a.x - b.x).abs() <= tol && (a.y - b.y).abs() <= tol
}

proptest! {
    #[test]
    fn basis_is_a_partition_of_unity(n in 0usize..=3, t in 0.0f64..=1.0) {
        let values: Vec<f64> = (0..=n).map(|i| bernstein_basis(i, n, t).unwrap()).collect();
        prop_assert!(values.iter().all(|&b| b >= 0.0));
        prop_assert!((values.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn endpoints_are_exact(c in curve()) {
        prop_assert_eq!(evaluate_curve(&c, 0.0).unwrap(), c.start());
        prop_assert_eq!(evaluate_curve(&c, 1.0).unwrap(), c.end());
    }

    #[test]
    fn points_stay_in_the_control_hull(c in curve(), t in 0.0f64..=1.0) {
        let p = evaluate_curve(&c, t).unwrap();
        prop_assert!(in_hull(c.control_points(), p, 1e-9), "{:?} at t={}", p, t);
    }

    #[test]
    fn reversal_mirrors_the_parameter(c in curve(), t in 0.0f64..=1.0) {
        let r = reverse_curve(&c);
        prop_assert!(close(evaluate_curve(&r, t).unwrap(), evaluate_curve(&c, 1.0 - t).unwrap(), 1e-9));
        prop_assert_eq!(reverse_curve(&r), c);
    }

    #[test]
    fn tangent_matches_a_central_difference(c in curve(), t in 0.01f64..0.99) {
        let h = 1e-6;
        let (a, b) = (evaluate_curve(&c, t + h).unwrap(), evaluate_curve(&c, t - h).unwrap());
        let (dx, dy) = ((a.x - b.x) / (2.0 * h), (a.y - b.y) / (2.0 * h));
        let norm = dx.hypot(dy);
        prop_assume!(norm >= 1e-3);
        let tan = tangent_at(&c, t).unwrap();
        prop_assert!((tan.dx - dx / norm).abs() <= 1e-5 && (tan.dy - dy / norm).abs() <= 1e-5);
        prop_assert!((tan.norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn arc_length_lies_between_chord_and_polygon(c in curve()) {
        let len = arc_length(&c, DEFAULT_ARC_SEGMENTS);
        let pts = c.control_points();
        let polygon: f64 = pts.windows(2).map(|w| w[0].distance(w[1])).sum();
        prop_assert!(len >= c.start().distance(c.end()) - 1e-9);
        prop_assert!(len <= polygon + 1e-9);
    }

    #[test]
    fn samples_are_evenly_spaced_in_parameter(c in curve(), k in 2usize..40) {
        let s = sample_uniform(&c, k).unwrap();
        prop_assert_eq!(s.len(), k);
        for (i, (p, _)) in s.iter().enumerate() {
            let t = i as f64 / (k - 1) as f64;
            prop_assert!(close(*p, evaluate_curve(&c, t).unwrap(), 1e-12));
        }
    }

    #[test]
    fn rdp_keeps_endpoints_and_stays_within_epsilon(
        pts in prop::collection::vec(point(50.0), 2..40),
        eps in 0.0f64..5.0,
    ) {
        let line = Polyline::from_points_dedup(pts);
        prop_assume!(line.is_ok());
        let line = line.unwrap();
        let simple = rdp_simplify(&line, eps);
        let v = simple.vertices();
        prop_assert_eq!(v[0], line.first());
        prop_assert_eq!(*v.last().unwrap(), line.last());
        // Kept vertices are a subsequence of the input.
        let mut it = line.vertices().iter();
        prop_assert!(v.iter().all(|p| it.any(|q| q == p)));
        // Every dropped vertex is within epsilon of the simplified polyline.
        for &p in line.vertices() {
            let d = v.windows(2).map(|w| point_segment_distance(p, w[0], w[1])).fold(f64::INFINITY, f64::min);
            prop_assert!(d <= eps + 1e-9, "vertex {:?} is {} away", p, d);
        }
    }

    #[test]
    fn unit_box_normalization_letterboxes(cs in prop::collection::vec(curve(), 1..6)) {
        let n = normalize_to_unit_box(&StrokeSequence::normalized(cs));
        let (lo, hi) = n.control_bounds().unwrap();
        let span = 1.0 - 2.0 * LETTERBOX_MARGIN;
        prop_assert!(lo.x >= LETTERBOX_MARGIN - 1e-9 && lo.y >= LETTERBOX_MARGIN - 1e-9);
        prop_assert!(hi.x <= 1.0 - LETTERBOX_MARGIN + 1e-9 && hi.y <= 1.0 - LETTERBOX_MARGIN + 1e-9);
        let extent = (hi.x - lo.x).max(hi.y - lo.y);
        prop_assert!(extent == 0.0 || (extent - span).abs() <= 1e-9);
        // Centered on both axes.
        prop_assert!(((lo.x + hi.x) / 2.0 - 0.5).abs() <= 1e-9);
        prop_assert!(((lo.y + hi.y) / 2.0 - 0.5).abs() <= 1e-9);
    }
}

#[test]
fn out_of_range_parameters_are_rejected() {
    let c = BezierCurve::line(Point2::new(0.0, 0.0), Point2::new(1.0, 1.0));
    for t in [-0.1, 1.1, f64::NAN] {
        assert!(evaluate_curve(&c, t).is_err());
        assert!(tangent_at(&c, t).is_err());
    }
    assert!(bernstein_basis(4, 3, 0.5).is_err());
    assert!(sample_uniform(&c, 1).is_err());
}

#[test]
fn curve_degree_limits() {
    let p = Point2::new(0.0, 0.0);
    assert!(BezierCurve::new(vec![p]).is_err());
    assert!(BezierCurve::new(vec![p; 5]).is_err());
    assert!(BezierCurve::new(vec![p, Point2::new(f64::NAN, 0.0)]).is_err());
}
