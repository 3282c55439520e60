//! Zhang-Suen thinning followed by removal of staircase pixels, so the result
//! is a 1-pixel-wide, 8-connected skeleton.

use super::bitmap::{Bitmap, Pixel, RING};

/// Neighbor states P2..P9 (N, NE, E, SE, S, SW, W, NW).
fn ring_states(b: &Bitmap, p: Pixel) -> [bool; 8] {
    RING.map(|(dx, dy)| b.get(p.offset(dx, dy)))
}

/// Number of off-to-on transitions around the ring.
fn transitions(n: &[bool; 8]) -> usize {
    (0..8).filter(|&i| !n[i] && n[(i + 1) % 8]).count()
}

fn zhang_suen_pass(b: &mut Bitmap, first: bool) -> bool {
    let mut remove = Vec::new();
    for p in b.on_pixels() {
        let n = ring_states(b, p);
        let count = n.iter().filter(|&&v| v).count();
        if !(2..=6).contains(&count) || transitions(&n) != 1 {
            continue;
        }
        let [p2, _, p4, _, p6, _, p8, _] = n;
        let ok = if first {
            !(p2 && p4 && p6) && !(p4 && p6 && p8)
        } else {
            !(p2 && p4 && p8) && !(p2 && p6 && p8)
        };
        if ok {
            remove.push(p);
        }
    }
    for &p in &remove {
        b.set(p, false);
    }
    !remove.is_empty()
}

/// Whether the on-neighbors of `p` form a single 8-connected group, so that
/// clearing `p` cannot split the skeleton.
fn neighbors_stay_connected(n: &[bool; 8]) -> bool {
    let on: Vec<usize> = (0..8).filter(|&i| n[i]).collect();
    if on.is_empty() {
        return false;
    }
    let mut group = vec![on[0]];
    let mut changed = true;
    while changed {
        changed = false;
        for &i in &on {
            if group.contains(&i) {
                continue;
            }
            let (xi, yi) = RING[i];
            if group.iter().any(|&j| {
                let (xj, yj) = RING[j];
                (xi - xj).abs() <= 1 && (yi - yj).abs() <= 1
            }) {
                group.push(i);
                changed = true;
            }
        }
    }
    group.len() == on.len()
}

/// Clears elbow pixels of 2-pixel-thick staircases. Sequential, row-major.
fn remove_staircases(b: &mut Bitmap) -> bool {
    let mut changed = false;
    for p in b.on_pixels().collect::<Vec<_>>() {
        let n = ring_states(b, p);
        let count = n.iter().filter(|&&v| v).count();
        let [north, _, east, _, south, _, west, _] = n;
        let elbow = (north || south) && (east || west);
        if count >= 2 && elbow && neighbors_stay_connected(&n) {
            b.set(p, false);
            changed = true;
        }
    }
    changed
}

/// Thins a binary image to a 1-pixel-wide 8-connected skeleton.
///
/// Applying it to its own output changes nothing.
pub fn skeletonize(b: &Bitmap) -> Bitmap {
    let mut out = b.clone();
    loop {
        let mut changed = false;
        loop {
            let a = zhang_suen_pass(&mut out, true);
            let c = zhang_suen_pass(&mut out, false);
            if !(a || c) {
                break;
            }
            changed = true;
        }
        changed |= remove_staircases(&mut out);
        if !changed {
            return out;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn thin_line_unchanged() {
        let b = Bitmap::from_ascii(&["..........", ".########.", ".........."]);
        assert_eq!(skeletonize(&b), b);
        let diag = Bitmap::from_ascii(&["#....", ".#...", "..#..", "...#.", "....#"]);
        assert_eq!(skeletonize(&diag), diag);
    }

    #[test]
    fn empty_stays_empty() {
        let b = Bitmap::new(6, 6);
        assert_eq!(skeletonize(&b), b);
    }

    #[test]
    fn bar_becomes_single_pixel_path() {
        let mut b = Bitmap::new(56, 9);
        for y in 2..7 {
            for x in 3..53 {
                b.set(Pixel::new(x, y), true);
            }
        }
        let s = skeletonize(&b);
        assert!(s.count_on() > 30);
        for x in 0..56 {
            let column = (0..9).filter(|&y| s.get(Pixel::new(x, y))).count();
            assert!(column <= 1, "column {x} has {column} pixels:\n{}", s.to_ascii().join("\n"));
        }
        assert_eq!(s.components().len(), 1);
    }

    #[test]
    fn skeleton_has_no_redundant_pixels() {
        // every non-endpoint pixel of a clean thick stroke skeleton has at most 2 neighbors
        let mut b = Bitmap::new(30, 30);
        for i in 0..30 {
            for w in -2..=2 {
                b.set(Pixel::new(i, (i + w).clamp(0, 29)), true);
            }
        }
        let s = skeletonize(&b);
        for p in s.on_pixels() {
            assert!(s.neighbor_count(p) <= 2, "{:?}\n{}", p, s.to_ascii().join("\n"));
        }
    }

    proptest! {
        #[test]
        fn idempotent(bits in proptest::collection::vec(any::<bool>(), 144)) {
            let mut b = Bitmap::new(12, 12);
            for (i, on) in bits.into_iter().enumerate() {
                b.set(Pixel::new((i % 12) as i32, (i / 12) as i32), on);
            }
            let once = skeletonize(&b);
            prop_assert_eq!(skeletonize(&once), once.clone());
            // thinning only removes pixels and never disconnects a component
            prop_assert!(once.on_pixels().all(|p| b.get(p)));
            let before: usize = b.components().len();
            prop_assert!(once.components().len() <= before);
        }
    }
}
