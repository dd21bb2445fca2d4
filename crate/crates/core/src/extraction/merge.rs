use crate::geometry::{Point2, Polyline, Vector2};

use super::ExtractionConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum End {
    Start,
    Finish,
}

fn terminal(p: &Polyline, end: End) -> Point2 {
    match end {
        End::Start => p.first(),
        End::Finish => p.last(),
    }
}

/// Unit vector pointing out of the polyline at `end`, along its last segment.
fn outward(p: &Polyline, end: End) -> Vector2 {
    let v = p.vertices();
    let d = match end {
        End::Start => v[0] - v[1],
        End::Finish => v[v.len() - 1] - v[v.len() - 2],
    };
    d.normalized()
}

/// Turning angle in degrees when leaving `a` through `ea` and entering `b`
/// through `eb`.
fn turning_angle(a: &Polyline, ea: End, b: &Polyline, eb: End) -> f64 {
    let leave = outward(a, ea);
    let enter = outward(b, eb) * -1.0;
    leave.cross(enter).atan2(leave.dot(enter)).abs().to_degrees()
}

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
struct Candidate {
    angle: f64,
    gap: f64,
    i: usize,
    j: usize,
    ea: End,
    eb: End,
}

fn join(a: &Polyline, ea: End, b: &Polyline, eb: End) -> Polyline {
    let a = match ea {
        End::Finish => a.clone(),
        End::Start => a.reversed(),
    };
    let b = match eb {
        End::Start => b.clone(),
        End::Finish => b.reversed(),
    };
    let mut vertices = a.into_vertices();
    vertices.extend(b.into_vertices());
    Polyline::from_points_dedup(vertices).expect("joined polyline has two distinct ends")
}

/// Greedily joins polylines whose ends are within `merge_gap` and whose
/// direction turns by less than `merge_angle` degrees across the join.
///
/// Each round merges the qualifying pair with the smallest turning angle,
/// then the smallest gap, then the lowest indices. Closed loops are never
/// merged.
pub fn merge_paths(polylines: Vec<Polyline>, config: &ExtractionConfig) -> Vec<Polyline> {
    let mut lines = polylines;
    let ends = [End::Start, End::Finish];
    loop {
        let mut best: Option<Candidate> = None;
        for i in 0..lines.len() {
            if lines[i].first() == lines[i].last() {
                continue;
            }
            for j in (i + 1)..lines.len() {
                if lines[j].first() == lines[j].last() {
                    continue;
                }
                for ea in ends {
                    for eb in ends {
                        let gap = terminal(&lines[i], ea).distance(terminal(&lines[j], eb));
                        if gap > config.merge_gap {
                            continue;
                        }
                        let angle = turning_angle(&lines[i], ea, &lines[j], eb);
                        if angle >= config.merge_angle {
                            continue;
                        }
                        let c = Candidate {
                            angle,
                            gap,
                            i,
                            j,
                            ea,
                            eb,
                        };
                        if best.is_none_or(|b| c < b) {
                            best = Some(c);
                        }
                    }
                }
            }
        }
        let Some(c) = best else {
            return lines;
        };
        let merged = join(&lines[c.i], c.ea, &lines[c.j], c.eb);
        lines[c.i] = merged;
        lines.remove(c.j);
    }
}
