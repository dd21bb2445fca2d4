//! Topology-preserving thinning.
//!
//! Two-subiteration Zhang–Suen thinning. Candidates of each subiteration are
//! collected in parallel as usual, but deleted one at a time in raster order,
//! re-checking that each is still a simple point. Plain parallel Zhang–Suen
//! erases 2×2 blocks entirely; the re-check keeps one pixel of them. A final
//! pass removes redundant staircase corners so diagonal runs are 8-thin.

use std::collections::VecDeque;

use super::raster::BinaryImage;

/// Neighbor offsets P2..P9: N, NE, E, SE, S, SW, W, NW (y grows downward).
const RING: [(i64, i64); 8] = [
    (0, -1),
    (1, -1),
    (1, 0),
    (1, 1),
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
];

const N: usize = 0;
const E: usize = 2;
const S: usize = 4;
const W: usize = 6;

fn ring(img: &BinaryImage, x: i64, y: i64) -> [bool; 8] {
    let mut out = [false; 8];
    for (slot, (dx, dy)) in out.iter_mut().zip(RING) {
        *slot = img.get_signed(x + dx, y + dy);
    }
    out
}

/// Number of background→foreground transitions walking the ring once.
fn transitions(r: &[bool; 8]) -> usize {
    (0..8).filter(|&i| !r[i] && r[(i + 1) % 8]).count()
}

fn neighbors(r: &[bool; 8]) -> usize {
    r.iter().filter(|&&b| b).count()
}

/// A ring with one foreground run and 2..=6 neighbors: deleting the center
/// keeps both the foreground and background components unchanged.
fn is_thinnable(r: &[bool; 8]) -> bool {
    (2..=6).contains(&neighbors(r)) && transitions(r) == 1
}

fn first_pass_condition(r: &[bool; 8]) -> bool {
    !(r[N] && r[E] && r[S]) && !(r[E] && r[S] && r[W])
}

fn second_pass_condition(r: &[bool; 8]) -> bool {
    !(r[N] && r[E] && r[W]) && !(r[N] && r[S] && r[W])
}

/// 8-connectivity number (Yokoi); 1 means the center is a simple point.
fn connectivity8(r: &[bool; 8]) -> usize {
    // Yokoi's formula indexes the ring from E counter-clockwise.
    let order = [E, 1, N, 7, W, 5, S, 3];
    let nb: Vec<bool> = order.iter().map(|&i| !r[i]).collect();
    (0..4)
        .filter(|&k| {
            let i = 2 * k;
            nb[i] && !(nb[i + 1] && nb[(i + 2) % 8])
        })
        .count()
}

/// Corner of a staircase: two adjacent orthogonal neighbors set, the two
/// opposite ones clear.
fn is_staircase_corner(r: &[bool; 8]) -> bool {
    let pairs = [(N, E, S, W), (E, S, W, N), (S, W, N, E), (W, N, E, S)];
    pairs
        .iter()
        .any(|&(a, b, c, d)| r[a] && r[b] && !r[c] && !r[d])
        && connectivity8(r) == 1
}

fn thinning_subiteration(img: &mut BinaryImage, first: bool) -> bool {
    let candidates: Vec<(u32, u32)> = img
        .foreground()
        .filter(|&(x, y)| {
            let r = ring(img, x as i64, y as i64);
            is_thinnable(&r)
                && if first {
                    first_pass_condition(&r)
                } else {
                    second_pass_condition(&r)
                }
        })
        .collect();
    let mut changed = false;
    for (x, y) in candidates {
        if is_thinnable(&ring(img, x as i64, y as i64)) {
            img.set(x, y, false);
            changed = true;
        }
    }
    changed
}

fn remove_staircases(img: &mut BinaryImage) {
    loop {
        let mut changed = false;
        let fg: Vec<(u32, u32)> = img.foreground().collect();
        for (x, y) in fg {
            if is_staircase_corner(&ring(img, x as i64, y as i64)) {
                img.set(x, y, false);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
}

/// Thins a mask to one-pixel-wide centerlines, preserving the number of
/// 8-connected components and holes.
pub fn skeletonize(binary: &BinaryImage) -> BinaryImage {
    let mut img = binary.clone();
    loop {
        let a = thinning_subiteration(&mut img, true);
        let b = thinning_subiteration(&mut img, false);
        if !a && !b {
            break;
        }
    }
    remove_staircases(&mut img);
    img
}

/// Number of 8-connected foreground components.
pub fn count_components(img: &BinaryImage) -> usize {
    let (w, h) = (img.width() as usize, img.height() as usize);
    let mut seen = vec![false; w * h];
    let mut count = 0;
    let mut queue = VecDeque::new();
    for (x, y) in img.foreground() {
        let idx = y as usize * w + x as usize;
        if seen[idx] {
            continue;
        }
        count += 1;
        seen[idx] = true;
        queue.push_back((x as i64, y as i64));
        while let Some((cx, cy)) = queue.pop_front() {
            for (dx, dy) in RING {
                let (nx, ny) = (cx + dx, cy + dy);
                if img.get_signed(nx, ny) {
                    let nidx = ny as usize * w + nx as usize;
                    if !seen[nidx] {
                        seen[nidx] = true;
                        queue.push_back((nx, ny));
                    }
                }
            }
        }
    }
    count
}
