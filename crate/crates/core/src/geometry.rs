//! Bézier curve mathematics and polyline processing.
//!
//! Every operation here is a pure function over immutable values. Curves are
//! capped at cubic degree; control points are plain `f64` pairs in whatever
//! coordinate space the owning [`StrokeSequence`] declares.

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{precondition, Result};

/// Highest supported curve degree.
pub const MAX_DEGREE: usize = 3;

/// Default number of chord segments used by [`arc_length`].
pub const DEFAULT_ARC_SEGMENTS: usize = 64;

/// Derivative norms below this are treated as degenerate tangents.
const TANGENT_EPS: f64 = 1e-12;

const BINOMIAL: [[f64; 4]; 4] = [
    [1.0, 0.0, 0.0, 0.0],
    [1.0, 1.0, 0.0, 0.0],
    [1.0, 2.0, 1.0, 0.0],
    [1.0, 3.0, 3.0, 1.0],
];

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Linear interpolation, exact at `t = 0` and `t = 1`.
    pub fn lerp(self, other: Point2, t: f64) -> Point2 {
        if t < 0.5 {
            Point2::new(self.x + (other.x - self.x) * t, self.y + (other.y - self.y) * t)
        } else {
            let s = 1.0 - t;
            Point2::new(other.x - (other.x - self.x) * s, other.y - (other.y - self.y) * s)
        }
    }
}

impl Sub for Point2 {
    type Output = Vector2;
    fn sub(self, rhs: Point2) -> Vector2 {
        Vector2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Add<Vector2> for Point2 {
    type Output = Point2;
    fn add(self, rhs: Vector2) -> Point2 {
        Point2::new(self.x + rhs.dx, self.y + rhs.dy)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vector2 {
    pub dx: f64,
    pub dy: f64,
}

impl Vector2 {
    pub const ZERO: Vector2 = Vector2 { dx: 0.0, dy: 0.0 };

    pub const fn new(dx: f64, dy: f64) -> Self {
        Self { dx, dy }
    }

    pub fn norm(self) -> f64 {
        self.dx.hypot(self.dy)
    }

    pub fn dot(self, other: Vector2) -> f64 {
        self.dx * other.dx + self.dy * other.dy
    }

    pub fn cross(self, other: Vector2) -> f64 {
        self.dx * other.dy - self.dy * other.dx
    }

    /// Unit vector in the same direction, or the zero vector when the norm is
    /// below `1e-12`.
    pub fn normalized(self) -> Vector2 {
        let n = self.norm();
        if n < TANGENT_EPS {
            Vector2::ZERO
        } else {
            Vector2::new(self.dx / n, self.dy / n)
        }
    }

    pub fn is_zero(self) -> bool {
        self.dx == 0.0 && self.dy == 0.0
    }
}

impl Mul<f64> for Vector2 {
    type Output = Vector2;
    fn mul(self, rhs: f64) -> Vector2 {
        Vector2::new(self.dx * rhs, self.dy * rhs)
    }
}

impl Add for Vector2 {
    type Output = Vector2;
    fn add(self, rhs: Vector2) -> Vector2 {
        Vector2::new(self.dx + rhs.dx, self.dy + rhs.dy)
    }
}

/// A Bézier curve of degree 1 to 3.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BezierCurve {
    control_points: Vec<Point2>,
}

impl BezierCurve {
    /// Builds a curve from 2 to 4 finite control points.
    pub fn new(control_points: Vec<Point2>) -> Result<Self> {
        if control_points.len() < 2 || control_points.len() > MAX_DEGREE + 1 {
            return Err(precondition(format!(
                "a curve needs 2 to {} control points, got {}",
                MAX_DEGREE + 1,
                control_points.len()
            )));
        }
        if let Some(p) = control_points.iter().find(|p| !p.is_finite()) {
            return Err(precondition(format!("non-finite control point {p:?}")));
        }
        Ok(Self { control_points })
    }

    pub fn line(a: Point2, b: Point2) -> Self {
        Self::new(vec![a, b]).expect("two finite points")
    }

    pub fn control_points(&self) -> &[Point2] {
        &self.control_points
    }

    pub fn degree(&self) -> usize {
        self.control_points.len() - 1
    }

    pub fn start(&self) -> Point2 {
        self.control_points[0]
    }

    pub fn end(&self) -> Point2 {
        self.control_points[self.control_points.len() - 1]
    }

    /// Evaluates the curve without range-checking `t`. de Casteljau evaluation: identical to the Bernstein sum, but exact
    /// for coincident control points and never leaves the control hull.
    pub(crate) fn point_at(&self, t: f64) -> Point2 {
        let mut buf = [Point2::default(); MAX_DEGREE + 1];
        let n = self.control_points.len();
        buf[..n].copy_from_slice(&self.control_points);
        for level in (1..n).rev() {
            for i in 0..level {
                buf[i] = buf[i].lerp(buf[i + 1], t);
            }
        }
        buf[0]
    }

    /// Raw (unnormalized) derivative `c'(t)`.
    pub(crate) fn derivative_at(&self, t: f64) -> Vector2 {
        let n = self.degree();
        let mut d = Vector2::ZERO;
        for (i, w) in self.control_points.windows(2).enumerate() {
            d = d + (w[1] - w[0]) * bernstein_unchecked(i, n - 1, t);
        }
        d * n as f64
    }

    pub(crate) fn second_derivative_at(&self, t: f64) -> Vector2 {
        let n = self.degree();
        if n < 2 {
            return Vector2::ZERO;
        }
        let mut d = Vector2::ZERO;
        for (i, w) in self.control_points.windows(3).enumerate() {
            d = d + ((w[2] - w[1]) + (w[1] - w[0]) * -1.0) * bernstein_unchecked(i, n - 2, t);
        }
        d * (n * (n - 1)) as f64
    }

    pub(crate) fn map_points(&self, f: impl Fn(Point2) -> Point2) -> BezierCurve {
        BezierCurve {
            control_points: self.control_points.iter().map(|&p| f(p)).collect(),
        }
    }
}

fn bernstein_unchecked(i: usize, n: usize, t: f64) -> f64 {
    BINOMIAL[n][i] * t.powi(i as i32) * (1.0 - t).powi((n - i) as i32)
}

fn check_parameter(t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(precondition(format!("curve parameter {t} outside [0, 1]")))
    }
}

/// `C(n,i) · t^i · (1−t)^(n−i)` for `n ≤ 3`.
pub fn bernstein_basis(i: usize, n: usize, t: f64) -> Result<f64> {
    if n > MAX_DEGREE || i > n {
        return Err(precondition(format!(
            "basis index {i} invalid for degree {n}"
        )));
    }
    check_parameter(t)?;
    Ok(bernstein_unchecked(i, n, t))
}

pub fn evaluate_curve(curve: &BezierCurve, t: f64) -> Result<Point2> {
    check_parameter(t)?;
    Ok(curve.point_at(t))
}

/// Unit tangent at `t`; the zero vector where the derivative vanishes.
pub fn tangent_at(curve: &BezierCurve, t: f64) -> Result<Vector2> {
    check_parameter(t)?;
    Ok(curve.derivative_at(t).normalized())
}

/// `k` (point, unit tangent) pairs at `t = 0, 1/(k−1), …, 1`.
pub fn sample_uniform(curve: &BezierCurve, k: usize) -> Result<Vec<(Point2, Vector2)>> {
    if k < 2 {
        return Err(precondition(format!("sample count must be at least 2, got {k}")));
    }
    let last = (k - 1) as f64;
    Ok((0..k)
        .map(|i| {
            let t = i as f64 / last;
            (curve.point_at(t), curve.derivative_at(t).normalized())
        })
        .collect())
}

/// Chord-sum approximation of the arc length over `segments` equal
/// parameter intervals.
pub fn arc_length(curve: &BezierCurve, segments: usize) -> f64 {
    let segments = segments.max(1);
    let mut prev = curve.start();
    let mut total = 0.0;
    for i in 1..=segments {
        let p = curve.point_at(i as f64 / segments as f64);
        total += prev.distance(p);
        prev = p;
    }
    total
}

pub fn reverse_curve(curve: &BezierCurve) -> BezierCurve {
    let mut control_points = curve.control_points.clone();
    control_points.reverse();
    BezierCurve { control_points }
}

/// An open chain of at least two points with no repeated consecutive vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    vertices: Vec<Point2>,
}

impl Polyline {
    pub fn new(vertices: Vec<Point2>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(precondition("a polyline needs at least 2 vertices"));
        }
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(precondition("polyline has repeated consecutive vertices"));
        }
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(precondition("polyline has non-finite vertices"));
        }
        Ok(Self { vertices })
    }

    /// Drops consecutive duplicates, then validates.
    pub fn from_points_dedup(mut points: Vec<Point2>) -> Result<Self> {
        points.dedup();
        Self::new(points)
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn first(&self) -> Point2 {
        self.vertices[0]
    }

    pub fn last(&self) -> Point2 {
        self.vertices[self.vertices.len() - 1]
    }

    pub fn reversed(&self) -> Polyline {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Polyline { vertices }
    }

    pub fn into_vertices(self) -> Vec<Point2> {
        self.vertices
    }
}

/// Distance from `p` to the closed segment `a`–`b`.
pub fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.distance(a.lerp(b, t))
}

/// Ramer–Douglas–Peucker simplification.
///
/// Deviation is measured against the chord *segment*, so every dropped
/// vertex stays within `epsilon` of the returned polyline even when the
/// input doubles back past an endpoint.
pub fn rdp_simplify(path: &Polyline, epsilon: f64) -> Polyline {
    let v = &path.vertices;
    // Distances are measured relative to the first vertex so near-ties
    // resolve the same way wherever the path sits.
    let o = v[0];
    let local = |p: Point2| Point2::new(p.x - o.x, p.y - o.y);
    let mut keep = vec![false; v.len()];
    keep[0] = true;
    keep[v.len() - 1] = true;
    let mut stack = vec![(0usize, v.len() - 1)];
    while let Some((lo, hi)) = stack.pop() {
        if hi <= lo + 1 {
            continue;
        }
        let (mut worst, mut worst_d) = (lo, -1.0);
        for (i, &p) in v.iter().enumerate().take(hi).skip(lo + 1) {
            let d = point_segment_distance(local(p), local(v[lo]), local(v[hi]));
            if d > worst_d {
                worst = i;
                worst_d = d;
            }
        }
        if worst_d > epsilon {
            keep[worst] = true;
            stack.push((worst, hi));
            stack.push((lo, worst));
        }
    }
    let vertices: Vec<Point2> = v
        .iter()
        .zip(&keep)
        .filter_map(|(&p, &k)| k.then_some(p))
        .collect();
    // A closed input (first == last) with no far vertex would collapse to a
    // repeated point; keep the farthest vertex so the loop survives.
    if vertices.len() == 2 && vertices[0] == vertices[1] {
        let far = (1..v.len() - 1)
            .max_by(|&a, &b| {
                v[a].distance(v[0])
                    .total_cmp(&v[b].distance(v[0]))
                    .then(b.cmp(&a))
            })
            .expect("closed polyline has an interior vertex");
        return Polyline {
            vertices: vec![v[0], v[far], v[0]],
        };
    }
    Polyline { vertices }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoordinateSpace {
    /// Unit square, y pointing up.
    Normalized,
    /// Raster pixel coordinates, y pointing down.
    Pixel { width: u32, height: u32 },
}

/// A glyph program: an ordered list of strokes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrokeSequence {
    pub strokes: Vec<BezierCurve>,
    pub space: CoordinateSpace,
}

impl StrokeSequence {
    pub fn normalized(strokes: Vec<BezierCurve>) -> Self {
        Self {
            strokes,
            space: CoordinateSpace::Normalized,
        }
    }

    pub fn empty() -> Self {
        Self::normalized(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.strokes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strokes.is_empty()
    }

    pub fn is_normalized(&self) -> bool {
        self.space == CoordinateSpace::Normalized
    }

    pub(crate) fn require_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(precondition("stroke sequence must be in normalized space"))
        }
    }

    /// Axis-aligned bounding box of all control points, `None` when empty.
    pub fn control_bounds(&self) -> Option<(Point2, Point2)> {
        let mut pts = self.strokes.iter().flat_map(|c| c.control_points.iter());
        let first = *pts.next()?;
        Some(pts.fold((first, first), |(lo, hi), p| {
            (
                Point2::new(lo.x.min(p.x), lo.y.min(p.y)),
                Point2::new(hi.x.max(p.x), hi.y.max(p.y)),
            )
        }))
    }
}

/// Fraction of the unit square left empty on each side by [`letterbox`].
pub const LETTERBOX_MARGIN: f64 = 0.05;

/// Maps points inside `bounds` into the unit square with a 5% margin,
/// preserving aspect ratio and centering the shorter axis. With `flip_y`,
/// the smallest input y lands at the top (raster rows to y-up).
pub fn letterbox(bounds: (Point2, Point2), flip_y: bool) -> impl Fn(Point2) -> Point2 {
    let (lo, hi) = bounds;
    let (w, h) = (hi.x - lo.x, hi.y - lo.y);
    let span = 1.0 - 2.0 * LETTERBOX_MARGIN;
    let longest = w.max(h);
    let scale = if longest > 0.0 { span / longest } else { 0.0 };
    let off_x = LETTERBOX_MARGIN + (span - w * scale) / 2.0;
    let off_y = LETTERBOX_MARGIN + (span - h * scale) / 2.0;
    move |p: Point2| {
        let x = off_x + (p.x - lo.x) * scale;
        let y = off_y + (p.y - lo.y) * scale;
        let y = if flip_y { 1.0 - y } else { y };
        Point2::new(x.clamp(0.0, 1.0), y.clamp(0.0, 1.0))
    }
}

/// Re-centers a normalized sequence about its control-point bounding box
/// with the same letterboxing the extractor uses.
pub fn normalize_to_unit_box(sequence: &StrokeSequence) -> StrokeSequence {
    let Some(bounds) = sequence.control_bounds() else {
        return StrokeSequence::empty();
    };
    let map = letterbox(bounds, false);
    StrokeSequence::normalized(sequence.strokes.iter().map(|c| c.map_points(&map)).collect())
}
