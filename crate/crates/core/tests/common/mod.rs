//! Generators and independent oracles shared by the integration suites.
#![allow(dead_code)]

use bezier_glyph::extraction::{BinaryImage, RasterImage};
use bezier_glyph::geometry::{normalize_to_unit_box, BezierCurve, Point2, StrokeSequence};
use bezier_glyph::metrics::SimilarityMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_point(rng: &mut impl Rng) -> Point2 {
    Point2::new(rng.gen_range(0.0..=1.0), rng.gen_range(0.0..=1.0))
}

pub fn random_curve(rng: &mut impl Rng) -> BezierCurve {
    let n = rng.gen_range(2..=4);
    BezierCurve::new((0..n).map(|_| random_point(rng)).collect()).unwrap()
}

pub fn random_sequence(rng: &mut impl Rng, strokes: std::ops::RangeInclusive<usize>) -> StrokeSequence {
    let n = rng.gen_range(strokes);
    StrokeSequence::normalized((0..n).map(|_| random_curve(rng)).collect())
}

/// A copy of `seq` with jittered control points, some strokes dropped and
/// some extra strokes added.
pub fn perturbed(rng: &mut impl Rng, seq: &StrokeSequence) -> StrokeSequence {
    let kept: Vec<&BezierCurve> = seq.strokes.iter().filter(|_| rng.gen_bool(0.85)).collect();
    let mut strokes: Vec<BezierCurve> = kept
        .into_iter()
        .map(|c| {
            let pts = c
                .control_points()
                .iter()
                .map(|p| {
                    Point2::new(
                        (p.x + rng.gen_range(-0.05..0.05)).clamp(0.0, 1.0),
                        (p.y + rng.gen_range(-0.05..0.05)).clamp(0.0, 1.0),
                    )
                })
                .collect();
            BezierCurve::new(pts).unwrap()
        })
        .collect();
    for _ in 0..rng.gen_range(0..=2) {
        strokes.push(random_curve(rng));
    }
    if strokes.is_empty() {
        strokes.push(random_curve(rng));
    }
    StrokeSequence::normalized(strokes)
}

/// Strokes stacked in disjoint bands, each monotone along the band, so no
/// two strokes touch and no stroke crosses itself. Half the glyphs are
/// transposed to get vertical bands.
pub fn well_separated_sequence(rng: &mut impl Rng) -> StrokeSequence {
    let n = rng.gen_range(1..=4);
    let transpose = rng.gen_bool(0.5);
    let strokes = (0..n)
        .map(|k| {
            let lo = 0.1 + 0.8 * (k as f64 + 0.2) / n as f64;
            let hi = 0.1 + 0.8 * (k as f64 + 0.8) / n as f64;
            let degree = rng.gen_range(1..=3);
            let pts = (0..=degree)
                .map(|i| {
                    let along = 0.1 + 0.8 * i as f64 / degree as f64 + rng.gen_range(-0.05..0.05);
                    let across = rng.gen_range(lo..hi);
                    if transpose {
                        Point2::new(across, along)
                    } else {
                        Point2::new(along, across)
                    }
                })
                .collect();
            BezierCurve::new(pts).unwrap()
        })
        .collect();
    normalize_to_unit_box(&StrokeSequence::normalized(strokes))
}

/// Maximum over all injections of the smaller side into the larger, with
/// each candidate total summed in ascending order of value.
pub fn brute_force_best(m: &SimilarityMatrix) -> f64 {
    let (r, c) = (m.rows(), m.cols());
    let transpose = r > c;
    let (small, large) = if transpose { (c, r) } else { (r, c) };
    let get = |i: usize, j: usize| if transpose { m.get(j, i) } else { m.get(i, j) };
    let mut best = f64::NEG_INFINITY;
    let mut chosen = Vec::with_capacity(small);
    let mut used = vec![false; large];
    fn go(
        i: usize,
        small: usize,
        large: usize,
        get: &dyn Fn(usize, usize) -> f64,
        chosen: &mut Vec<f64>,
        used: &mut [bool],
        best: &mut f64,
    ) {
        if i == small {
            let mut v = chosen.clone();
            v.sort_by(f64::total_cmp);
            let total = v.into_iter().fold(0.0, |a, b| a + b);
            if total > *best {
                *best = total;
            }
            return;
        }
        for j in 0..large {
            if !used[j] {
                used[j] = true;
                chosen.push(get(i, j));
                go(i + 1, small, large, get, chosen, used, best);
                chosen.pop();
                used[j] = false;
            }
        }
    }
    go(0, small, large, &get, &mut chosen, &mut used, &mut best);
    if small == 0 {
        0.0
    } else {
        best
    }
}

fn cross(o: Point2, a: Point2, b: Point2) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

/// Convex hull by Andrew's monotone chain, counter-clockwise, no repeats.
pub fn convex_hull(points: &[Point2]) -> Vec<Point2> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<Point2> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0.0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<Point2> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0.0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0)
    };
    ((p.x - a.x - t * dx).powi(2) + (p.y - a.y - t * dy).powi(2)).sqrt()
}

/// Whether `p` lies in the convex hull of `points`, allowing `slack`.
pub fn in_hull(points: &[Point2], p: Point2, slack: f64) -> bool {
    let hull = convex_hull(points);
    match hull.len() {
        0 => false,
        1 => p.distance(hull[0]) <= slack,
        2 => segment_distance(p, hull[0], hull[1]) <= slack,
        n => (0..n).all(|i| {
            let (a, b) = (hull[i], hull[(i + 1) % n]);
            let len = a.distance(b);
            cross(a, b, p) / len >= -slack
        }),
    }
}

/// One synthetic corpus shape: ink predicate over pixel centers.
type Shape = Box<dyn Fn(f64, f64) -> bool>;

fn bar(x0: f64, y0: f64, x1: f64, y1: f64, thickness: f64) -> Shape {
    let (a, b) = (Point2::new(x0, y0), Point2::new(x1, y1));
    Box::new(move |x, y| segment_distance(Point2::new(x, y), a, b) <= thickness / 2.0)
}

fn ring(cx: f64, cy: f64, r_in: f64, r_out: f64) -> Shape {
    Box::new(move |x, y| {
        let d = ((x - cx).powi(2) + (y - cy).powi(2)).sqrt();
        d >= r_in && d <= r_out
    })
}

fn disc(cx: f64, cy: f64, r: f64) -> Shape {
    ring(cx, cy, 0.0, r)
}

fn draw(size: u32, shapes: &[Shape]) -> BinaryImage {
    let mut img = BinaryImage::empty(size, size);
    for y in 0..size {
        for x in 0..size {
            if shapes.iter().any(|s| s(x as f64, y as f64)) {
                img.set(x, y, true);
            }
        }
    }
    img
}

/// Fifty labelled binary glyphs: bars, crosses, rings, multi-component
/// and mixed shapes, with seeded random geometry.
pub fn glyph_corpus() -> Vec<(String, BinaryImage)> {
    let mut r = rng(0x5eed);
    let s = 96.0;
    let mut out = Vec::new();
    for i in 0..10 {
        let angle: f64 = r.gen_range(0.0..std::f64::consts::PI);
        let half = r.gen_range(25.0..40.0);
        let (dx, dy) = (angle.cos() * half, angle.sin() * half);
        let t = r.gen_range(2.0..9.0);
        out.push((format!("bar-{i}"), draw(96, &[bar(48.0 - dx, 48.0 - dy, 48.0 + dx, 48.0 + dy, t)])));
    }
    for i in 0..10 {
        let t = r.gen_range(3.0..9.0);
        let c = r.gen_range(40.0..56.0);
        let shapes = if i % 2 == 0 {
            vec![bar(10.0, c, s - 10.0, c, t), bar(c, 10.0, c, s - 10.0, t)]
        } else {
            vec![bar(12.0, 12.0, s - 12.0, s - 12.0, t), bar(12.0, s - 12.0, s - 12.0, 12.0, t)]
        };
        out.push((format!("cross-{i}"), draw(96, &shapes)));
    }
    for i in 0..10 {
        let r_out = r.gen_range(20.0..40.0);
        let width = r.gen_range(3.0..10.0);
        out.push((format!("ring-{i}"), draw(96, &[ring(48.0, 48.0, r_out - width, r_out)])));
    }
    for i in 0..10 {
        let t = r.gen_range(3.0..7.0);
        let shapes = match i % 3 {
            0 => vec![bar(10.0, 20.0, 86.0, 20.0, t), bar(10.0, 70.0, 86.0, 70.0, t)],
            1 => vec![bar(15.0, 15.0, 15.0, 80.0, t), ring(60.0, 48.0, 14.0, 14.0 + t), disc(85.0, 85.0, 4.0)],
            _ => vec![disc(20.0, 20.0, 5.0), disc(75.0, 25.0, 6.0), bar(20.0, 70.0, 80.0, 75.0, t)],
        };
        out.push((format!("multi-{i}"), draw(96, &shapes)));
    }
    for i in 0..10 {
        let t = r.gen_range(3.0..8.0);
        let shapes = match i % 4 {
            0 => vec![bar(15.0, 15.0, 81.0, 15.0, t), bar(48.0, 15.0, 48.0, 85.0, t)],
            1 => vec![bar(20.0, 10.0, 20.0, 80.0, t), bar(20.0, 80.0, 80.0, 80.0, t)],
            2 => vec![ring(48.0, 48.0, 25.0, 25.0 + t), bar(10.0, 48.0, 86.0, 48.0, t)],
            _ => vec![
                bar(10.0, 10.0, 86.0, 10.0, t),
                bar(86.0, 10.0, 86.0, 86.0, t),
                bar(86.0, 86.0, 10.0, 86.0, t),
                bar(10.0, 86.0, 10.0, 10.0, t),
                bar(10.0, 48.0, 86.0, 48.0, t),
            ],
        };
        out.push((format!("mixed-{i}"), draw(96, &shapes)));
    }
    out
}

/// Black ink on white paper.
pub fn to_raster(img: &BinaryImage) -> RasterImage {
    let pixels = img.bits().iter().map(|&b| if b { 0 } else { 255 }).collect();
    RasterImage::new(img.width(), img.height(), pixels).unwrap()
}
