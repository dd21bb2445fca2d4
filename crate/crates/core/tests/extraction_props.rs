mod common;

use std::collections::BTreeMap;

use bezier_glyph::error::Error;
use bezier_glyph::extraction::{
    build_pixel_graph, count_components, extract_glyph, extract_glyph_traced, fit_polyline, segment_paths,
    skeletonize, BinaryImage, ExtractionConfig, RasterImage,
};
use bezier_glyph::geometry::{evaluate_curve, Point2, Polyline, LETTERBOX_MARGIN};
use common::{glyph_corpus, to_raster};
use proptest::prelude::*;

#[test]
fn skeletons_preserve_components_and_stay_inside_the_ink() {
    for (name, img) in glyph_corpus() {
        let skel = skeletonize(&img);
        assert_eq!(count_components(&img), count_components(&skel), "{name}");
        for (x, y) in skel.foreground() {
            assert!(img.get(x, y), "{name}: skeleton pixel ({x},{y}) outside ink");
        }
        assert!(skel.count_foreground() < img.count_foreground() || img.count_foreground() < 8, "{name}");
    }
}

#[test]
fn skeletons_are_one_pixel_thin() {
    for (name, img) in glyph_corpus() {
        let s = skeletonize(&img);
        for y in 0..s.height() - 1 {
            for x in 0..s.width() - 1 {
                let block = s.get(x, y) && s.get(x + 1, y) && s.get(x, y + 1) && s.get(x + 1, y + 1);
                assert!(!block, "{name}: 2x2 block at ({x},{y})");
            }
        }
    }
}

#[test]
fn segmentation_covers_every_edge_exactly_once() {
    for (name, img) in glyph_corpus() {
        let graph = build_pixel_graph(&skeletonize(&img));
        for min in [1, 4, 12] {
            let seg = segment_paths(&graph, min);
            let mut seen: BTreeMap<_, usize> = BTreeMap::new();
            for e in seg.paths.iter().chain(&seg.discarded).flat_map(|p| p.edges()) {
                *seen.entry(e).or_default() += 1;
            }
            let edges = graph.edges();
            assert_eq!(edges.len(), seen.len(), "{name} min={min}");
            assert!(edges.iter().all(|e| seen.get(e) == Some(&1)), "{name} min={min}");
            // Consecutive path pixels are 8-neighbours.
            for p in seg.paths.iter().chain(&seg.discarded) {
                assert!(p.edges().count() + 1 == p.len(), "{name}: path edge count");
            }
        }
    }
}

#[test]
fn extraction_is_deterministic_and_normalized() {
    let config = ExtractionConfig::default();
    for (name, img) in glyph_corpus() {
        let raster = to_raster(&img);
        let a = extract_glyph(&raster, &config).unwrap();
        let b = extract_glyph(&raster, &config).unwrap();
        assert_eq!(a, b, "{name}");
        assert!(a.is_normalized() && !a.is_empty(), "{name}");
        let (lo, hi) = a.control_bounds().unwrap();
        for p in a.strokes.iter().flat_map(|c| c.control_points()) {
            assert!((0.0..=1.0).contains(&p.x) && (0.0..=1.0).contains(&p.y), "{name}: {p:?}");
        }
        let extent = (hi.x - lo.x).max(hi.y - lo.y);
        assert!(extent >= 1.0 - 2.0 * LETTERBOX_MARGIN - 1e-9, "{name}: extent {extent}");
        assert!(a.strokes.iter().all(|c| (1..=3).contains(&c.degree())), "{name}");
    }
}

#[test]
fn fitted_curves_stay_within_tolerance_of_their_vertices() {
    let config = ExtractionConfig::default();
    for (name, img) in glyph_corpus() {
        let trace = extract_glyph_traced(&to_raster(&img), &config).unwrap();
        for line in &trace.merged {
            let spans = fit_polyline(line, config.fit_tolerance);
            assert_eq!(spans[0].first, 0, "{name}");
            assert_eq!(spans.last().unwrap().last, line.len() - 1, "{name}");
            for w in spans.windows(2) {
                assert_eq!(w[0].last, w[1].first, "{name}: spans must chain");
            }
            for span in &spans {
                let verts = &line.vertices()[span.first..=span.last];
                assert_eq!(span.params.len(), verts.len(), "{name}");
                assert_eq!(span.curve.start(), verts[0], "{name}: start not interpolated");
                assert_eq!(span.curve.end(), *verts.last().unwrap(), "{name}: end not interpolated");
                for (&t, &v) in span.params.iter().zip(verts) {
                    let d = evaluate_curve(&span.curve, t).unwrap().distance(v);
                    assert!(d <= config.fit_tolerance + 1e-9, "{name}: residual {d}");
                }
            }
        }
    }
}

#[test]
fn translating_the_ink_does_not_change_the_result() {
    let config = ExtractionConfig::default();
    for (name, img) in glyph_corpus().into_iter().step_by(3) {
        let (w, h) = (img.width() + 17, img.height() + 9);
        let mut shifted = BinaryImage::empty(w, h);
        for (x, y) in img.foreground() {
            shifted.set(x + 11, y + 5, true);
        }
        let a = extract_glyph(&to_raster(&img), &config).unwrap();
        let b = extract_glyph(&to_raster(&shifted), &config).unwrap();
        assert_eq!(a.len(), b.len(), "{name}");
        for (ca, cb) in a.strokes.iter().zip(&b.strokes) {
            for (p, q) in ca.control_points().iter().zip(cb.control_points()) {
                assert!((p.x - q.x).abs() < 1e-9 && (p.y - q.y).abs() < 1e-9, "{name}: {p:?} vs {q:?}");
            }
        }
    }
}

#[test]
fn blank_and_invalid_inputs_are_reported() {
    let blank = RasterImage::filled(40, 40, 255).unwrap();
    assert!(matches!(extract_glyph(&blank, &ExtractionConfig::default()), Err(Error::EmptyGlyph)));
    let bad = ExtractionConfig {
        rdp_epsilon: -1.0,
        ..ExtractionConfig::default()
    };
    let ink = RasterImage::filled(40, 40, 0).unwrap();
    assert!(extract_glyph(&ink, &bad).is_err());
}

fn random_binary(w: u32, h: u32, bits: Vec<bool>) -> BinaryImage {
    BinaryImage::new(w, h, bits).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_blobs_keep_their_topology(bits in prop::collection::vec(prop::bool::weighted(0.45), 24 * 24)) {
        let img = random_binary(24, 24, bits);
        let skel = skeletonize(&img);
        prop_assert_eq!(count_components(&img), count_components(&skel));
        let graph = build_pixel_graph(&skel);
        let seg = segment_paths(&graph, 4);
        let covered: usize = seg.paths.iter().chain(&seg.discarded).map(|p| p.edges().count()).sum();
        prop_assert_eq!(covered, graph.edges().len());
    }

    #[test]
    fn extraction_never_panics(pixels in prop::collection::vec(any::<u8>(), 20 * 20)) {
        let raster = RasterImage::new(20, 20, pixels).unwrap();
        match extract_glyph(&raster, &ExtractionConfig::default()) {
            Ok(seq) => prop_assert!(seq.strokes.iter().flat_map(|c| c.control_points()).all(|p| p.is_finite())),
            Err(e) => prop_assert!(matches!(e, Error::EmptyGlyph), "{}", e),
        }
    }

    #[test]
    fn fit_covers_arbitrary_polylines(pts in prop::collection::vec((0.0f64..200.0, 0.0f64..200.0), 2..30), tol in 0.5f64..5.0) {
        let line = Polyline::from_points_dedup(pts.into_iter().map(|(x, y)| Point2::new(x, y)).collect());
        prop_assume!(line.is_ok());
        let line = line.unwrap();
        let spans = fit_polyline(&line, tol);
        prop_assert_eq!(spans[0].first, 0);
        prop_assert_eq!(spans.last().unwrap().last, line.len() - 1);
        for span in &spans {
            for (&t, &v) in span.params.iter().zip(&line.vertices()[span.first..=span.last]) {
                prop_assert!(evaluate_curve(&span.curve, t).unwrap().distance(v) <= tol + 1e-9);
            }
        }
    }
}
