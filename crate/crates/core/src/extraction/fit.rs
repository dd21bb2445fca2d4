//! Least-squares Bézier fitting with endpoint interpolation.

use crate::geometry::{point_segment_distance, BezierCurve, Point2, Polyline};

use super::ExtractionConfig;

/// Cumulative chord length of each vertex, scaled to `[0, 1]`.
pub fn chord_parameters(points: &[Point2]) -> Vec<f64> {
    let mut acc = 0.0;
    let mut ts = Vec::with_capacity(points.len());
    ts.push(0.0);
    for w in points.windows(2) {
        acc += w[0].distance(w[1]);
        ts.push(acc);
    }
    let total = acc;
    if total > 0.0 {
        ts.iter_mut().for_each(|t| *t /= total);
    }
    if let Some(last) = ts.last_mut() {
        *last = 1.0;
    }
    ts
}

/// Residual of each point against the curve at its chord parameter.
fn residuals(curve: &BezierCurve, points: &[Point2], ts: &[f64]) -> Vec<f64> {
    points
        .iter()
        .zip(ts)
        .map(|(&q, &t)| curve.point_at(t).distance(q))
        .collect()
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(0.0, f64::max)
}

fn fit_quadratic(points: &[Point2], ts: &[f64]) -> Option<BezierCurve> {
    let p0 = points[0];
    let p2 = points[points.len() - 1];
    let (mut den, mut nx, mut ny) = (0.0, 0.0, 0.0);
    for (&q, &t) in points.iter().zip(ts) {
        let s = 1.0 - t;
        let (b0, b1, b2) = (s * s, 2.0 * s * t, t * t);
        den += b1 * b1;
        nx += b1 * (q.x - b0 * p0.x - b2 * p2.x);
        ny += b1 * (q.y - b0 * p0.y - b2 * p2.y);
    }
    if den < 1e-12 {
        return None;
    }
    BezierCurve::new(vec![p0, Point2::new(nx / den, ny / den), p2]).ok()
}

fn fit_cubic(points: &[Point2], ts: &[f64]) -> Option<BezierCurve> {
    let p0 = points[0];
    let p3 = points[points.len() - 1];
    let (mut a11, mut a12, mut a22) = (0.0, 0.0, 0.0);
    let (mut r1x, mut r1y, mut r2x, mut r2y) = (0.0, 0.0, 0.0, 0.0);
    for (&q, &t) in points.iter().zip(ts) {
        let s = 1.0 - t;
        let b0 = s * s * s;
        let b1 = 3.0 * s * s * t;
        let b2 = 3.0 * s * t * t;
        let b3 = t * t * t;
        a11 += b1 * b1;
        a12 += b1 * b2;
        a22 += b2 * b2;
        let rx = q.x - b0 * p0.x - b3 * p3.x;
        let ry = q.y - b0 * p0.y - b3 * p3.y;
        r1x += b1 * rx;
        r1y += b1 * ry;
        r2x += b2 * rx;
        r2y += b2 * ry;
    }
    let det = a11 * a22 - a12 * a12;
    if det.abs() < 1e-12 {
        return None;
    }
    let c1 = Point2::new((a22 * r1x - a12 * r2x) / det, (a22 * r1y - a12 * r2y) / det);
    let c2 = Point2::new((a11 * r2x - a12 * r1x) / det, (a11 * r2y - a12 * r1y) / det);
    BezierCurve::new(vec![p0, c1, c2, p3]).ok()
}

/// One Newton step per point towards the parameter of its closest curve point.
fn reparameterize(curve: &BezierCurve, points: &[Point2], ts: &mut [f64]) {
    let n = ts.len();
    for (k, (q, t)) in points.iter().zip(ts.iter_mut()).enumerate() {
        if k == 0 || k == n - 1 {
            continue;
        }
        let d = curve.point_at(*t) - *q;
        let d1 = curve.derivative_at(*t);
        let d2 = curve.second_derivative_at(*t);
        let den = d1.dot(d1) + d.dot(d2);
        if den.abs() > 1e-12 {
            *t = (*t - d.dot(d1) / den).clamp(0.0, 1.0);
        }
    }
}

const REPARAM_ITERATIONS: usize = 400;

/// Fits at chord-length parameters; if the residual is too large, refines
/// the parameters by Newton projection and refits.
fn fit_refined(points: &[Point2], ts: &[f64], degree: usize, tolerance: f64) -> Option<(BezierCurve, Vec<f64>, Vec<f64>)> {
    let curve = fit_degree(points, ts, degree)?;
    let res = residuals(&curve, points, ts);
    let mut best = (curve, ts.to_vec(), res);
    if degree == 1 || max_of(&best.2) <= tolerance {
        return Some(best);
    }
    let mut params = ts.to_vec();
    let mut curve = best.0.clone();
    for _ in 0..REPARAM_ITERATIONS {
        reparameterize(&curve, points, &mut params);
        if params.windows(2).any(|w| w[1] < w[0]) {
            break;
        }
        curve = match fit_degree(points, &params, degree) {
            Some(c) => c,
            None => break,
        };
        let res = residuals(&curve, points, &params);
        if max_of(&res) < max_of(&best.2) {
            best = (curve.clone(), params.clone(), res);
        }
        if max_of(&best.2) <= tolerance {
            break;
        }
    }
    Some(best)
}

/// How far, in multiples of the vertex tolerance, a fitted curve may wander
/// from its polyline between vertices.
const STRAY_FACTOR: f64 = 2.0;
const STRAY_SAMPLES: usize = 64;

/// Whether every sampled point of `curve` lies within `bound` of the
/// polyline through `points`. Vertex residuals alone miss curves that loop
/// away between sparse vertices.
fn stays_near(curve: &BezierCurve, points: &[Point2], bound: f64) -> bool {
    (0..=STRAY_SAMPLES).all(|i| {
        let p = curve.point_at(i as f64 / STRAY_SAMPLES as f64);
        points
            .windows(2)
            .any(|w| point_segment_distance(p, w[0], w[1]) <= bound)
    })
}

fn fit_degree(points: &[Point2], ts: &[f64], degree: usize) -> Option<BezierCurve> {
    match degree {
        1 => Some(BezierCurve::line(points[0], points[points.len() - 1])),
        2 if points.len() >= 3 => fit_quadratic(points, ts),
        3 if points.len() >= 4 => fit_cubic(points, ts),
        _ => None,
    }
}

/// One fitted curve, the inclusive vertex range of the polyline it covers
/// and the curve parameter assigned to each covered vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct FittedSpan {
    pub curve: BezierCurve,
    pub first: usize,
    pub last: usize,
    pub params: Vec<f64>,
}

fn fit_points(all: &[Point2], first: usize, last: usize, tolerance: f64, out: &mut Vec<FittedSpan>) {
    // Fitting relative to the first vertex makes the result independent of
    // where the glyph sits on the canvas.
    let origin = all[first];
    let local: Vec<Point2> = all[first..=last]
        .iter()
        .map(|p| Point2::new(p.x - origin.x, p.y - origin.y))
        .collect();
    let points = &local[..];
    let ts = chord_parameters(points);
    let mut worst: Option<Vec<f64>> = None;
    for degree in 1..=3 {
        if let Some((curve, params, res)) = fit_refined(points, &ts, degree, tolerance) {
            if max_of(&res) <= tolerance && stays_near(&curve, points, STRAY_FACTOR * tolerance) {
                let mut pts: Vec<Point2> = curve
                    .control_points()
                    .iter()
                    .map(|p| Point2::new(p.x + origin.x, p.y + origin.y))
                    .collect();
                let n = pts.len() - 1;
                pts[0] = all[first];
                pts[n] = all[last];
                out.push(FittedSpan {
                    curve: BezierCurve::new(pts).expect("finite control points"),
                    first,
                    last,
                    params,
                });
                return;
            }
            worst = Some(res);
        }
    }
    let res = worst.expect("a line fit always exists");
    // Only interior vertices are split points, so both halves keep >= 2 points.
    let split = (1..points.len() - 1)
        .max_by(|&a, &b| res[a].total_cmp(&res[b]).then(b.cmp(&a)))
        .expect("a failed fit has an interior vertex");
    fit_points(all, first, first + split, tolerance, out);
    fit_points(all, first + split, last, tolerance, out);
}

/// Fits one polyline, reporting which vertices each curve covers.
pub fn fit_polyline(line: &Polyline, tolerance: f64) -> Vec<FittedSpan> {
    let mut out = Vec::new();
    fit_points(line.vertices(), 0, line.len() - 1, tolerance, &mut out);
    out
}

/// Splits a closed polyline (first vertex repeated at the end) at the
/// vertex farthest from its seam and fits the two halves separately.
fn fit_closed(line: &Polyline, tolerance: f64) -> Vec<BezierCurve> {
    let v = line.vertices();
    let seam = v[0];
    let far = (1..v.len() - 1)
        .max_by(|&a, &b| v[a].distance(seam).total_cmp(&v[b].distance(seam)).then(b.cmp(&a)))
        .expect("a closed polyline has an interior vertex");
    [&v[..=far], &v[far..]]
        .into_iter()
        .flat_map(|half| {
            let half = Polyline::new(half.to_vec()).expect("each half has two vertices");
            fit_polyline(&half, tolerance).into_iter().map(|s| s.curve)
        })
        .collect()
}

/// Fits each polyline with the lowest degree (1 to 3) whose maximum
/// residual is within `fit_tolerance`. Parameters start at chord length and
/// are refined by Newton projection when that is not enough. Polylines that
/// even a cubic misses are split at their worst vertex and fitted piecewise.
/// Closed polylines are first cut in two at the vertex farthest from the
/// seam.
pub fn fit_strokes(polylines: &[Polyline], config: &ExtractionConfig) -> Vec<BezierCurve> {
    polylines
        .iter()
        .flat_map(|line| {
            if line.len() >= 4 && line.first() == line.last() {
                fit_closed(line, config.fit_tolerance)
            } else {
                fit_polyline(line, config.fit_tolerance).into_iter().map(|s| s.curve).collect()
            }
        })
        .collect()
}
