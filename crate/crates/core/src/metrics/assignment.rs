//! Maximum-weight bipartite assignment (Hungarian method).

use serde::{Deserialize, Serialize};

use crate::error::{precondition, Result};

/// Dense row-major similarity matrix with entries in `[0, 1]`.
/// Rows index ground-truth strokes, columns generated strokes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl SimilarityMatrix {
    pub fn new(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != rows * cols {
            return Err(precondition(format!(
                "{rows}x{cols} matrix needs {} values, got {}",
                rows * cols,
                values.len()
            )));
        }
        if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(precondition(format!("similarity {v} outside [0, 1]")));
        }
        Ok(Self { rows, cols, values })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(precondition("ragged matrix rows"));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    pub(crate) fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let values = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .map(|(i, j)| f(i, j).clamp(0.0, 1.0))
            .collect();
        Self { rows, cols, values }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols + col]
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }
}

/// One-to-one pairing of `min(rows, cols)` (row, column) pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchAssignment {
    /// `(ground-truth index, generated index)`, sorted by ground-truth index.
    pub pairs: Vec<(usize, usize)>,
    pub total: f64,
}

/// Sum of the matched similarities, accumulated in ascending order of value
/// so the result does not depend on how the strokes were numbered.
pub fn canonical_total(matrix: &SimilarityMatrix, pairs: &[(usize, usize)]) -> f64 {
    let mut vals: Vec<f64> = pairs.iter().map(|&(i, j)| matrix.get(i, j)).collect();
    vals.sort_by(f64::total_cmp);
    vals.into_iter().fold(0.0, |acc, v| acc + v)
}

/// Minimum-cost assignment of every row of an `n × m` cost matrix
/// (`n ≤ m`) using potentials. Returns the column of each row.
fn hungarian_min(n: usize, m: usize, cost: impl Fn(usize, usize) -> f64) -> Vec<usize> {
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; m + 1];
    let mut p = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut col_of = vec![0; n];
    for j in 1..=m {
        if p[j] != 0 {
            col_of[p[j] - 1] = j - 1;
        }
    }
    col_of
}

/// Best matching restricted to the given rows and columns. Returns the
/// pairs (in matrix indices) and their plain sum.
fn best_matching(
    matrix: &SimilarityMatrix,
    rows: &[usize],
    cols: &[usize],
) -> (Vec<(usize, usize)>, f64) {
    if rows.is_empty() || cols.is_empty() {
        return (Vec::new(), 0.0);
    }
    let pairs: Vec<(usize, usize)> = if rows.len() <= cols.len() {
        hungarian_min(rows.len(), cols.len(), |a, b| -matrix.get(rows[a], cols[b]))
            .into_iter()
            .enumerate()
            .map(|(a, b)| (rows[a], cols[b]))
            .collect()
    } else {
        hungarian_min(cols.len(), rows.len(), |b, a| -matrix.get(rows[a], cols[b]))
            .into_iter()
            .enumerate()
            .map(|(b, a)| (rows[a], cols[b]))
            .collect()
    };
    let total = pairs.iter().map(|&(i, j)| matrix.get(i, j)).sum();
    (pairs, total)
}

fn upper_bound(matrix: &SimilarityMatrix, rows: &[usize], cols: &[usize]) -> f64 {
    let by_rows: f64 = rows
        .iter()
        .map(|&i| cols.iter().map(|&j| matrix.get(i, j)).fold(0.0, f64::max))
        .sum();
    let by_cols: f64 = cols
        .iter()
        .map(|&j| rows.iter().map(|&i| matrix.get(i, j)).fold(0.0, f64::max))
        .sum();
    by_rows.min(by_cols)
}

/// Optimal one-to-one assignment maximizing total similarity.
///
/// Rectangular matrices behave as if padded to square with zero-similarity
/// dummies, which are dropped from the result. Among optimal assignments
/// (within `1e-12` per pair of floating-point slack) the lexicographically
/// smallest sorted pair list is returned, so output is reproducible.
pub fn assign_optimal(matrix: &SimilarityMatrix) -> MatchAssignment {
    if matrix.is_empty() {
        return MatchAssignment {
            pairs: Vec::new(),
            total: 0.0,
        };
    }
    let need = matrix.rows().min(matrix.cols());
    let all_rows: Vec<usize> = (0..matrix.rows()).collect();
    let all_cols: Vec<usize> = (0..matrix.cols()).collect();
    let (mut current, optimum) = best_matching(matrix, &all_rows, &all_cols);
    current.sort();
    let tol = 1e-12 * need as f64;

    let mut fixed: Vec<(usize, usize)> = Vec::with_capacity(need);
    let mut fixed_total = 0.0;
    let mut used_cols = vec![false; matrix.cols()];
    let mut next_row = 0;

    while fixed.len() < need {
        let incumbent = current[fixed.len()];
        let still_needed = need - fixed.len() - 1;
        let mut chosen = None;

        'search: for i in next_row..=incumbent.0 {
            let rest_rows: Vec<usize> = (i + 1..matrix.rows()).collect();
            for j in 0..matrix.cols() {
                if used_cols[j] || (i, j) >= incumbent {
                    continue;
                }
                let rest_cols: Vec<usize> =
                    (0..matrix.cols()).filter(|&c| c != j && !used_cols[c]).collect();
                if rest_rows.len().min(rest_cols.len()) < still_needed {
                    continue;
                }
                let head = fixed_total + matrix.get(i, j);
                if head + upper_bound(matrix, &rest_rows, &rest_cols) < optimum - tol {
                    continue;
                }
                let (tail, tail_total) = best_matching(matrix, &rest_rows, &rest_cols);
                if head + tail_total >= optimum - tol {
                    let mut next: Vec<(usize, usize)> = fixed.clone();
                    next.push((i, j));
                    next.extend(tail);
                    next.sort();
                    current = next;
                    chosen = Some((i, j));
                    break 'search;
                }
            }
        }

        let (i, j) = chosen.unwrap_or(incumbent);
        fixed.push((i, j));
        fixed_total += matrix.get(i, j);
        used_cols[j] = true;
        next_row = i + 1;
    }

    let total = canonical_total(matrix, &fixed);
    MatchAssignment {
        pairs: fixed,
        total,
    }
}
