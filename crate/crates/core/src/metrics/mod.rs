//! Geometric Score: stroke-level similarity rewards, optimal stroke
//! matching and score shaping, plus win-rate arithmetic.
//!
//! Each generated stroke is compared to each ground-truth stroke with three
//! sub-rewards (distance, length, angle). The composite similarity also
//! tries the generated stroke reversed. Every matrix is matched
//! independently, normalized by the larger stroke count and optionally
//! passed through a sigmoid that spreads out scores near the 0.8 threshold.

mod assignment;
mod winrate;

use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::geometry::{
    arc_length, reverse_curve, sample_uniform, BezierCurve, StrokeSequence, DEFAULT_ARC_SEGMENTS,
};

pub use assignment::{assign_optimal, canonical_total, MatchAssignment, SimilarityMatrix};
pub use winrate::{format_percent, win_rate, Tally};

/// Lengths below this are treated as degenerate.
const LENGTH_EPS: f64 = 1e-9;

/// Tunable constants of the score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricConfig {
    /// Parameter-aligned samples per curve.
    pub sample_count: usize,
    pub w_distance: f64,
    pub w_length: f64,
    pub w_angle: f64,
    pub sigmoid_center: f64,
    pub sigmoid_steepness: f64,
    pub apply_sigmoid: bool,
}

impl Default for MetricConfig {
    fn default() -> Self {
        Self {
            sample_count: 10,
            w_distance: 0.6,
            w_length: 0.2,
            w_angle: 0.2,
            sigmoid_center: 0.8,
            sigmoid_steepness: 10.0,
            apply_sigmoid: true,
        }
    }
}

impl MetricConfig {
    pub fn validate(&self) -> Result<()> {
        let w = [self.w_distance, self.w_length, self.w_angle];
        if w.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(precondition("metric weights must be non-negative"));
        }
        let sum: f64 = w.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(precondition(format!("metric weights must sum to 1, got {sum}")));
        }
        if self.sample_count < 2 {
            return Err(precondition("sample_count must be at least 2"));
        }
        if !self.sigmoid_center.is_finite() {
            return Err(precondition("sigmoid_center must be finite"));
        }
        if !(self.sigmoid_steepness.is_finite() && self.sigmoid_steepness > 0.0) {
            return Err(precondition("sigmoid_steepness must be positive"));
        }
        Ok(())
    }
}

type Samples = Vec<(crate::geometry::Point2, crate::geometry::Vector2)>;

/// Samples and arc length of one curve, computed once per stroke.
struct Profile {
    samples: Samples,
    length: f64,
}

impl Profile {
    fn new(curve: &BezierCurve, config: &MetricConfig) -> Self {
        Self {
            samples: sample_uniform(curve, config.sample_count.max(2)).expect("sample count is at least 2"),
            length: arc_length(curve, DEFAULT_ARC_SEGMENTS),
        }
    }
}

fn distance_of(a: &Profile, b: &Profile) -> f64 {
    let (sa, sb) = (&a.samples, &b.samples);
    let mean = sa.iter().zip(sb).map(|(p, q)| p.0.distance(q.0)).sum::<f64>() / sa.len() as f64;
    1.0 / (1.0 + mean)
}

fn length_of(a: &Profile, b: &Profile) -> f64 {
    let (la, lb) = (a.length, b.length);
    match (la < LENGTH_EPS, lb < LENGTH_EPS) {
        (true, true) => 1.0,
        (true, false) | (false, true) => 0.0,
        _ => la.min(lb) / la.max(lb),
    }
}

fn angle_of(a: &Profile, b: &Profile) -> f64 {
    let (sa, sb) = (&a.samples, &b.samples);
    let sum: f64 = sa
        .iter()
        .zip(sb)
        .map(|(p, q)| {
            let cos = if p.1.is_zero() || q.1.is_zero() {
                0.0
            } else {
                p.1.dot(q.1).clamp(-1.0, 1.0)
            };
            (cos + 1.0) / 2.0
        })
        .sum();
    sum / sa.len() as f64
}

fn weighted_of(gt: &Profile, gen: &Profile, config: &MetricConfig) -> f64 {
    config.w_distance * distance_of(gt, gen) + config.w_length * length_of(gt, gen) + config.w_angle * angle_of(gt, gen)
}

fn composite_of(gt: &Profile, gen: &Profile, gen_rev: &Profile, config: &MetricConfig) -> f64 {
    weighted_of(gt, gen, config).max(weighted_of(gt, gen_rev, config)).clamp(0.0, 1.0)
}

/// `1 / (1 + d̄)` with `d̄` the mean distance between parameter-aligned samples.
pub fn distance_reward(a: &BezierCurve, b: &BezierCurve, config: &MetricConfig) -> f64 {
    distance_of(&Profile::new(a, config), &Profile::new(b, config))
}

/// Ratio of the shorter arc length to the longer.
pub fn length_reward(a: &BezierCurve, b: &BezierCurve) -> f64 {
    let (la, lb) = (arc_length(a, DEFAULT_ARC_SEGMENTS), arc_length(b, DEFAULT_ARC_SEGMENTS));
    let p = |length| Profile {
        samples: Vec::new(),
        length,
    };
    length_of(&p(la), &p(lb))
}

/// Mean tangent cosine mapped from `[-1, 1]` to `[0, 1]`. A sample where
/// either tangent vanishes counts as cosine 0.
pub fn angle_reward(a: &BezierCurve, b: &BezierCurve, config: &MetricConfig) -> f64 {
    angle_of(&Profile::new(a, config), &Profile::new(b, config))
}

/// Weighted reward of `gen` against `gt`, taking the better of `gen` and
/// its reversal.
pub fn composite_similarity(gt: &BezierCurve, gen: &BezierCurve, config: &MetricConfig) -> f64 {
    composite_of(
        &Profile::new(gt, config),
        &Profile::new(gen, config),
        &Profile::new(&reverse_curve(gen), config),
        config,
    )
}

/// The four similarity matrices between two sequences.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixSet {
    pub distance: SimilarityMatrix,
    pub angle: SimilarityMatrix,
    pub length: SimilarityMatrix,
    pub composite: SimilarityMatrix,
}

pub fn build_matrices(gt: &StrokeSequence, gen: &StrokeSequence, config: &MetricConfig) -> Result<MatrixSet> {
    if gt.is_empty() {
        return Err(Error::EmptyInput("ground-truth sequence has no strokes".into()));
    }
    if gen.is_empty() {
        return Err(Error::EmptyInput("generated sequence has no strokes".into()));
    }
    let g: Vec<Profile> = gt.strokes.iter().map(|c| Profile::new(c, config)).collect();
    let h: Vec<Profile> = gen.strokes.iter().map(|c| Profile::new(c, config)).collect();
    let hr: Vec<Profile> = gen.strokes.iter().map(|c| Profile::new(&reverse_curve(c), config)).collect();
    let (r, c) = (g.len(), h.len());
    Ok(MatrixSet {
        distance: SimilarityMatrix::from_fn(r, c, |i, j| distance_of(&g[i], &h[j])),
        angle: SimilarityMatrix::from_fn(r, c, |i, j| angle_of(&g[i], &h[j])),
        length: SimilarityMatrix::from_fn(r, c, |i, j| length_of(&g[i], &h[j])),
        composite: SimilarityMatrix::from_fn(r, c, |i, j| composite_of(&g[i], &h[j], &hr[j], config)),
    })
}

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Logistic curve rescaled so that `0 ↦ 0` and `1 ↦ 1`.
pub fn shaped_sigmoid(x: f64, center: f64, steepness: f64) -> f64 {
    let lo = logistic(-steepness * center);
    let hi = logistic(steepness * (1.0 - center));
    ((logistic(steepness * (x - center)) - lo) / (hi - lo)).clamp(0.0, 1.0)
}

/// Normalizes a matching total by the larger stroke count and shapes it.
/// Returns `(base, final)`.
pub fn normalize_and_shape(total: f64, gt_count: usize, gen_count: usize, config: &MetricConfig) -> (f64, f64) {
    let denom = gt_count.max(gen_count).max(1) as f64;
    let base = (total / denom).clamp(0.0, 1.0);
    let shaped = if config.apply_sigmoid {
        shaped_sigmoid(base, config.sigmoid_center, config.sigmoid_steepness)
    } else {
        base
    };
    (base, shaped)
}

/// Final scores of one ground-truth / generated pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreReport {
    pub geometric: f64,
    pub distance: f64,
    pub angle: f64,
    pub length: f64,
    pub base_geometric: f64,
    pub gt_strokes: usize,
    pub gen_strokes: usize,
    /// Matching of the composite matrix.
    pub assignment: MatchAssignment,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<String>,
}

/// Scores `gen` against `gt`. An empty `gen` scores zero rather than failing.
pub fn geometric_score(gt: &StrokeSequence, gen: &StrokeSequence, config: &MetricConfig) -> Result<ScoreReport> {
    config.validate()?;
    if gt.is_empty() {
        return Err(Error::EmptyInput("ground-truth sequence has no strokes".into()));
    }
    gt.require_normalized()?;
    gen.require_normalized()?;
    if gen.is_empty() {
        return Ok(ScoreReport {
            geometric: 0.0,
            distance: 0.0,
            angle: 0.0,
            length: 0.0,
            base_geometric: 0.0,
            gt_strokes: gt.len(),
            gen_strokes: 0,
            assignment: MatchAssignment {
                pairs: Vec::new(),
                total: 0.0,
            },
            diagnostics: vec!["generated sequence is empty; all scores are 0".into()],
        });
    }
    let m = build_matrices(gt, gen, config)?;
    let (n, k) = (gt.len(), gen.len());
    let score = |matrix: &SimilarityMatrix| {
        let a = assign_optimal(matrix);
        let (base, shaped) = normalize_and_shape(a.total, n, k, config);
        (a, base, shaped)
    };
    let (assignment, base_geometric, geometric) = score(&m.composite);
    Ok(ScoreReport {
        geometric,
        distance: score(&m.distance).2,
        angle: score(&m.angle).2,
        length: score(&m.length).2,
        base_geometric,
        gt_strokes: n,
        gen_strokes: k,
        assignment,
        diagnostics: Vec::new(),
    })
}
