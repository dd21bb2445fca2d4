//! Skeleton pixel graph and its segmentation into stroke paths.

use std::collections::{BTreeMap, HashSet};

use super::raster::BinaryImage;

/// Integer pixel coordinate; ordering is by column, then row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pixel {
    pub x: u32,
    pub y: u32,
}

impl Pixel {
    pub const fn new(x: u32, y: u32) -> Self {
        Self { x, y }
    }

    fn offset(self, dx: i64, dy: i64) -> Option<Pixel> {
        let x = u32::try_from(self.x as i64 + dx).ok()?;
        let y = u32::try_from(self.y as i64 + dy).ok()?;
        Some(Pixel::new(x, y))
    }

    pub fn chebyshev(self, other: Pixel) -> u32 {
        self.x.abs_diff(other.x).max(self.y.abs_diff(other.y))
    }
}

type Edge = (Pixel, Pixel);

fn edge_key(a: Pixel, b: Pixel) -> Edge {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// 8-connected graph over skeleton pixels.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SkeletonGraph {
    adjacency: BTreeMap<Pixel, Vec<Pixel>>,
}

impl SkeletonGraph {
    pub fn nodes(&self) -> impl Iterator<Item = Pixel> + '_ {
        self.adjacency.keys().copied()
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    /// Sorted neighbor list.
    pub fn neighbors(&self, p: Pixel) -> &[Pixel] {
        self.adjacency.get(&p).map_or(&[], Vec::as_slice)
    }

    pub fn degree(&self, p: Pixel) -> usize {
        self.neighbors(p).len()
    }

    /// Every edge once, as `(smaller, larger)` in sorted order.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out: Vec<Edge> = self
            .adjacency
            .iter()
            .flat_map(|(&a, ns)| ns.iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
            .collect();
        out.sort();
        out
    }
}

/// Connects 8-adjacent skeleton pixels. A diagonal pair is left unconnected
/// when an orthogonal neighbor common to both is also ink, so an L-shaped
/// corner gives a path rather than a triangle.
pub fn build_pixel_graph(skeleton: &BinaryImage) -> SkeletonGraph {
    let is_ink =
        |p: Option<Pixel>| p.is_some_and(|p| skeleton.get_signed(p.x as i64, p.y as i64));
    let mut adjacency = BTreeMap::new();
    for (x, y) in skeleton.foreground() {
        let p = Pixel::new(x, y);
        let mut ns = Vec::new();
        for dy in -1i64..=1 {
            for dx in -1i64..=1 {
                if dx == 0 && dy == 0 {
                    continue;
                }
                let q = p.offset(dx, dy);
                if !is_ink(q) {
                    continue;
                }
                if dx != 0 && dy != 0 && (is_ink(p.offset(dx, 0)) || is_ink(p.offset(0, dy))) {
                    continue;
                }
                ns.push(q.expect("ink implies in bounds"));
            }
        }
        ns.sort();
        adjacency.insert(p, ns);
    }
    SkeletonGraph { adjacency }
}

/// A chain of 8-adjacent skeleton pixels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PixelPath {
    pub pixels: Vec<Pixel>,
}

impl PixelPath {
    pub fn first(&self) -> Pixel {
        self.pixels[0]
    }

    pub fn last(&self) -> Pixel {
        self.pixels[self.pixels.len() - 1]
    }

    pub fn is_closed(&self) -> bool {
        self.pixels.len() > 2 && self.first() == self.last()
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.pixels.windows(2).map(|w| edge_key(w[0], w[1]))
    }
}

/// Result of [`segment_paths`]: the kept stroke paths and the short
/// junction spurs that were pruned. Together they cover every graph edge
/// exactly once.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Segmentation {
    pub paths: Vec<PixelPath>,
    pub discarded: Vec<PixelPath>,
}

fn trace(
    graph: &SkeletonGraph,
    start: Pixel,
    first_step: Pixel,
    visited: &mut HashSet<Edge>,
) -> PixelPath {
    let mut pixels = vec![start];
    let (mut prev, mut cur) = (start, first_step);
    visited.insert(edge_key(prev, cur));
    loop {
        pixels.push(cur);
        if cur == start || graph.degree(cur) != 2 {
            break;
        }
        let next = graph
            .neighbors(cur)
            .iter()
            .copied()
            .find(|&n| n != prev && !visited.contains(&edge_key(cur, n)));
        match next {
            Some(n) => {
                visited.insert(edge_key(cur, n));
                prev = cur;
                cur = n;
            }
            None => break,
        }
    }
    PixelPath { pixels }
}

/// Splits the graph into paths between nodes whose degree is not 2.
///
/// Isolated cycles become one closed path starting and ending at their
/// smallest pixel. Paths with fewer than `min_path_pixels` pixels that touch
/// a junction are pruned as thinning spurs, unless that would strip every
/// long branch from the junction.
pub fn segment_paths(graph: &SkeletonGraph, min_path_pixels: usize) -> Segmentation {
    let mut visited: HashSet<Edge> = HashSet::new();
    let mut raw = Vec::new();

    for node in graph.nodes() {
        if graph.degree(node) == 2 {
            continue;
        }
        for &n in graph.neighbors(node) {
            if !visited.contains(&edge_key(node, n)) {
                raw.push(trace(graph, node, n, &mut visited));
            }
        }
    }
    for node in graph.nodes() {
        let next = graph
            .neighbors(node)
            .iter()
            .copied()
            .find(|&n| !visited.contains(&edge_key(node, n)));
        if let Some(n) = next {
            raw.push(trace(graph, node, n, &mut visited));
        }
    }

    let is_junction = |p: Pixel| graph.degree(p) >= 3;
    let is_short = |path: &PixelPath| path.len() < min_path_pixels;

    // Long branches incident to each junction.
    let mut long_at: BTreeMap<Pixel, usize> = BTreeMap::new();
    for path in raw.iter().filter(|p| !is_short(p)) {
        for end in [path.first(), path.last()] {
            if is_junction(end) {
                *long_at.entry(end).or_default() += 1;
            }
        }
    }

    let mut seg = Segmentation::default();
    for path in raw {
        let junction_ends: Vec<Pixel> = [path.first(), path.last()]
            .into_iter()
            .filter(|&p| is_junction(p))
            .collect();
        let spur = is_short(&path)
            && !junction_ends.is_empty()
            && junction_ends
                .iter()
                .all(|j| long_at.get(j).copied().unwrap_or(0) > 0);
        if spur {
            seg.discarded.push(path);
        } else {
            seg.paths.push(path);
        }
    }
    seg
}
