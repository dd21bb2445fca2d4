mod common;

use bezier_glyph::geometry::{reverse_curve, BezierCurve, Point2, StrokeSequence};
use bezier_glyph::metrics::{
    assign_optimal, build_matrices, canonical_total, composite_similarity, distance_reward, geometric_score,
    shaped_sigmoid, MetricConfig, SimilarityMatrix,
};
use common::{brute_force_best, perturbed, random_curve, random_sequence, rng};
use proptest::prelude::*;
use rand::seq::SliceRandom;

fn matrix() -> impl Strategy<Value = SimilarityMatrix> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop_oneof![0.0f64..=1.0, Just(0.0), Just(0.5), Just(1.0)], r * c)
            .prop_map(move |v| SimilarityMatrix::new(r, c, v).unwrap())
    })
}

fn transpose(m: &SimilarityMatrix) -> SimilarityMatrix {
    let v = (0..m.cols()).flat_map(|j| (0..m.rows()).map(move |i| m.get(i, j))).collect();
    SimilarityMatrix::new(m.cols(), m.rows(), v).unwrap()
}

fn no_sigmoid() -> MetricConfig {
    MetricConfig {
        apply_sigmoid: false,
        ..MetricConfig::default()
    }
}

proptest! {
    #[test]
    fn assignment_matches_brute_force(m in matrix()) {
        let a = assign_optimal(&m);
        prop_assert_eq!(a.total, brute_force_best(&m));
        prop_assert_eq!(a.total, canonical_total(&m, &a.pairs));
        prop_assert_eq!(a.pairs.len(), m.rows().min(m.cols()));
        prop_assert!(a.pairs.windows(2).all(|w| w[0].0 < w[1].0));
        let mut cols: Vec<usize> = a.pairs.iter().map(|p| p.1).collect();
        cols.sort();
        cols.dedup();
        prop_assert_eq!(cols.len(), a.pairs.len());
    }

    #[test]
    fn assignment_total_ignores_transposition(m in matrix()) {
        prop_assert_eq!(assign_optimal(&m).total, assign_optimal(&transpose(&m)).total);
    }

    #[test]
    fn assignment_is_deterministic(m in matrix()) {
        prop_assert_eq!(assign_optimal(&m), assign_optimal(&m.clone()));
    }

    #[test]
    fn sigmoid_is_monotone_and_pinned(a in 0.0f64..=1.0, b in 0.0f64..=1.0, c in 0.05f64..0.95, k in 0.5f64..30.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(shaped_sigmoid(lo, c, k) <= shaped_sigmoid(hi, c, k));
        prop_assert!(shaped_sigmoid(0.0, c, k).abs() <= 1e-12);
        prop_assert!((shaped_sigmoid(1.0, c, k) - 1.0).abs() <= 1e-12);
        let v = shaped_sigmoid(a, c, k);
        prop_assert!((0.0..=1.0).contains(&v));
    }

    #[test]
    fn scores_are_bounded(seed in any::<u64>()) {
        let mut r = rng(seed);
        let gt = random_sequence(&mut r, 1..=8);
        let gen = random_sequence(&mut r, 1..=8);
        for config in [MetricConfig::default(), no_sigmoid()] {
            let s = geometric_score(&gt, &gen, &config).unwrap();
            for v in [s.geometric, s.distance, s.angle, s.length, s.base_geometric] {
                prop_assert!((0.0..=1.0).contains(&v), "{}", v);
            }
        }
    }

    #[test]
    fn composite_is_symmetric(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (a, b) = (random_curve(&mut r), random_curve(&mut r));
        let c = MetricConfig::default();
        prop_assert!((composite_similarity(&a, &b, &c) - composite_similarity(&b, &a, &c)).abs() <= 1e-12);
    }
}

#[test]
fn identity_permutation_and_reversal() {
    let config = MetricConfig::default();
    let mut r = rng(11);
    for _ in 0..60 {
        let gt = random_sequence(&mut r, 1..=12);
        let same = geometric_score(&gt, &gt, &config).unwrap();
        for v in [same.geometric, same.distance, same.angle, same.length, same.base_geometric] {
            assert!((v - 1.0).abs() <= 1e-9, "{v}");
        }

        let gen = perturbed(&mut r, &gt);
        let base = geometric_score(&gt, &gen, &config).unwrap();
        let mut shuffled = gen.clone();
        shuffled.strokes.shuffle(&mut r);
        let s = geometric_score(&gt, &shuffled, &config).unwrap();
        assert_eq!(
            (s.geometric, s.distance, s.angle, s.length),
            (base.geometric, base.distance, base.angle, base.length)
        );

        let reversed = StrokeSequence::normalized(gen.strokes.iter().map(reverse_curve).collect());
        assert_eq!(geometric_score(&gt, &reversed, &config).unwrap().geometric, base.geometric);
    }
}

#[test]
fn extra_strokes_lower_the_score_exactly() {
    let config = no_sigmoid();
    let mut r = rng(12);
    for _ in 0..30 {
        let gt = random_sequence(&mut r, 1..=6);
        let n = gt.len();
        let mut previous = 1.0;
        let mut gen = gt.clone();
        for m in 1..=4 {
            gen.strokes.push(random_curve(&mut r));
            let s = geometric_score(&gt, &gen, &config).unwrap();
            let expected = n as f64 / (n + m) as f64;
            assert!((s.base_geometric - expected).abs() <= 1e-12, "{} vs {expected}", s.base_geometric);
            assert!(s.base_geometric < previous);
            previous = s.base_geometric;
        }
    }
}

#[test]
fn missing_strokes_lower_the_score_exactly() {
    let config = no_sigmoid();
    let mut r = rng(13);
    for _ in 0..30 {
        let gt = random_sequence(&mut r, 2..=8);
        let n = gt.len();
        for keep in 1..n {
            let gen = StrokeSequence::normalized(gt.strokes[..keep].to_vec());
            let s = geometric_score(&gt, &gen, &config).unwrap();
            assert!((s.base_geometric - keep as f64 / n as f64).abs() <= 1e-12);
        }
    }
}

fn line(a: (f64, f64), b: (f64, f64)) -> BezierCurve {
    BezierCurve::line(Point2::new(a.0, a.1), Point2::new(b.0, b.1))
}

#[test]
fn reversed_line_distance_matches_the_closed_form() {
    // Sample i of the reversed line sits |1 - 2t_i| * L away from sample i
    // of the original.
    for k in [2, 3, 10, 25] {
        let config = MetricConfig {
            sample_count: k,
            ..MetricConfig::default()
        };
        for (a, b) in [((0.0, 0.0), (1.0, 0.0)), ((0.1, 0.2), (0.7, 0.9))] {
            let len = f64::hypot(b.0 - a.0, b.1 - a.1);
            let mean = (0..k).map(|i| (1.0 - 2.0 * i as f64 / (k - 1) as f64).abs() * len).sum::<f64>() / k as f64;
            let d = distance_reward(&line(a, b), &line(b, a), &config);
            assert!((d - 1.0 / (1.0 + mean)).abs() <= 1e-12, "k={k}: {d}");
            let c = composite_similarity(&line(a, b), &line(b, a), &config);
            assert!((c - 1.0).abs() <= 1e-12);
        }
    }
}

#[test]
fn sub_scores_do_not_forgive_reversal() {
    let config = no_sigmoid();
    let gt = StrokeSequence::normalized(vec![line((0.1, 0.5), (0.9, 0.5))]);
    let gen = StrokeSequence::normalized(vec![line((0.9, 0.5), (0.1, 0.5))]);
    let s = geometric_score(&gt, &gen, &config).unwrap();
    assert!((s.geometric - 1.0).abs() <= 1e-12);
    assert!(s.angle.abs() <= 1e-12);
    assert!((s.length - 1.0).abs() <= 1e-12);
    assert!(s.distance < 1.0);
}

#[test]
fn matrices_have_the_input_shape() {
    let mut r = rng(14);
    let (gt, gen) = (random_sequence(&mut r, 3..=3), random_sequence(&mut r, 5..=5));
    let m = build_matrices(&gt, &gen, &MetricConfig::default()).unwrap();
    for x in [&m.distance, &m.angle, &m.length, &m.composite] {
        assert_eq!((x.rows(), x.cols()), (3, 5));
    }
    assert!(build_matrices(&gt, &StrokeSequence::empty(), &MetricConfig::default()).is_err());
}

#[test]
fn empty_generation_scores_zero_and_empty_truth_is_an_error() {
    let mut r = rng(15);
    let gt = random_sequence(&mut r, 2..=2);
    let s = geometric_score(&gt, &StrokeSequence::empty(), &MetricConfig::default()).unwrap();
    assert_eq!((s.geometric, s.distance, s.angle, s.length), (0.0, 0.0, 0.0, 0.0));
    assert_eq!(s.diagnostics.len(), 1);
    assert!(geometric_score(&StrokeSequence::empty(), &gt, &MetricConfig::default()).is_err());
}
