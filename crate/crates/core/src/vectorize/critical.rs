use std::collections::{BTreeMap, BTreeSet};

use super::bitmap::{Bitmap, Pixel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CriticalKind {
    Endpoint,
    Junction,
    Corner,
    /// Anchor pixel of a closed loop that has no other critical point.
    LoopAnchor,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RawCriticalPoint {
    pub pixel: Pixel,
    pub kind: CriticalKind,
    /// Every skeleton pixel consolidated into this point (the pixel itself
    /// for endpoints).
    pub cluster: Vec<Pixel>,
    /// Interior angle in radians, corners only.
    pub angle: Option<f64>,
}

/// Skeleton path between two critical points (indices into the critical list).
/// `pixels` runs from the start point's pixel to the end point's pixel.
#[derive(Clone, Debug, PartialEq)]
pub struct Polyline {
    pub pixels: Vec<Pixel>,
    pub start: usize,
    pub end: usize,
}

impl Polyline {
    pub fn is_closed(&self) -> bool {
        self.start == self.end
    }

    /// Cumulative Euclidean pixel length.
    pub fn length(&self) -> f64 {
        self.pixels.windows(2).map(|w| w[0].dist(w[1])).sum()
    }
}

/// Endpoints (one neighbor) and junctions (three or more neighbors, adjacent
/// junction pixels consolidated into one point nearest their centroid).
pub fn extract_critical_points(skel: &Bitmap) -> Vec<RawCriticalPoint> {
    let mut out = Vec::new();
    let mut junction_pixels = Bitmap::new(skel.width, skel.height);
    for p in skel.on_pixels() {
        match skel.neighbor_count(p) {
            1 => out.push(RawCriticalPoint { pixel: p, kind: CriticalKind::Endpoint, cluster: vec![p], angle: None }),
            n if n >= 3 => junction_pixels.set(p, true),
            _ => {}
        }
    }
    for cluster in junction_pixels.components() {
        let n = cluster.len() as f64;
        let cx = cluster.iter().map(|p| p.x as f64).sum::<f64>() / n;
        let cy = cluster.iter().map(|p| p.y as f64).sum::<f64>() / n;
        let rep = *cluster
            .iter()
            .min_by(|a, b| {
                let da = (a.x as f64 - cx).powi(2) + (a.y as f64 - cy).powi(2);
                let db = (b.x as f64 - cx).powi(2) + (b.y as f64 - cy).powi(2);
                da.total_cmp(&db).then(a.cmp(b))
            })
            .unwrap();
        out.push(RawCriticalPoint { pixel: rep, kind: CriticalKind::Junction, cluster, angle: None });
    }
    out.sort_by_key(|c| c.pixel);
    out
}

struct Tracer<'a> {
    skel: &'a Bitmap,
    owner: BTreeMap<Pixel, usize>,
    visited: BTreeSet<Pixel>,
}

impl Tracer<'_> {
    /// Walks from critical point `from` through `first` until another critical
    /// pixel is reached.
    fn walk(&mut self, from: usize, origin: Pixel, first: Pixel, criticals: &[RawCriticalPoint]) -> Polyline {
        let mut pixels = vec![criticals[from].pixel];
        if origin != criticals[from].pixel {
            pixels.push(origin);
        }
        let mut prev = origin;
        let mut cur = first;
        let mut steps = 0;
        loop {
            if let Some(&owner) = self.owner.get(&cur) {
                pixels.push(cur);
                if cur != criticals[owner].pixel {
                    pixels.push(criticals[owner].pixel);
                }
                return Polyline { pixels, start: from, end: owner };
            }
            self.visited.insert(cur);
            pixels.push(cur);
            steps += 1;
            let mut candidates: Vec<Pixel> = self
                .skel
                .neighbors(cur)
                .filter(|&q| q != prev && !self.visited.contains(&q))
                // don't step straight back into the cluster we just left
                .filter(|&q| steps >= 3 || self.owner.get(&q) != Some(&from))
                .collect();
            if candidates.is_empty() {
                // dead end on an unclean skeleton: the stroke simply stops here
                return Polyline { pixels, start: from, end: usize::MAX };
            }
            // prefer reaching a critical point, then 4-neighbors, then row-major order
            candidates.sort_by_key(|&q| {
                let critical = self.owner.contains_key(&q);
                let diagonal = q.x != cur.x && q.y != cur.y;
                (!critical, diagonal, q)
            });
            prev = cur;
            cur = candidates[0];
        }
    }
}

/// Splits the skeleton into polylines between critical points.
///
/// Every non-critical skeleton pixel lies on exactly one polyline. Components
/// without any critical point are closed loops; each is anchored at its
/// smallest pixel in row-major order, which is appended to the returned
/// critical list as a `LoopAnchor`.
pub fn trace_segments(skel: &Bitmap, criticals: &[RawCriticalPoint]) -> (Vec<Polyline>, Vec<RawCriticalPoint>) {
    let mut criticals = criticals.to_vec();
    let mut tracer = Tracer { skel, owner: BTreeMap::new(), visited: BTreeSet::new() };
    for (i, c) in criticals.iter().enumerate() {
        for &p in &c.cluster {
            tracer.owner.insert(p, i);
        }
    }

    let mut lines = Vec::new();
    let mut direct: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut i = 0;
    loop {
        while i < criticals.len() {
            let cluster = criticals[i].cluster.clone();
            for origin in cluster {
                for first in skel.neighbors(origin).collect::<Vec<_>>() {
                    match tracer.owner.get(&first) {
                        Some(&j) if j == i => continue,
                        Some(&j) => {
                            // two critical points touching directly
                            if direct.insert((i.min(j), i.max(j))) {
                                let mut pixels = vec![criticals[i].pixel];
                                for p in [origin, first, criticals[j].pixel] {
                                    if *pixels.last().unwrap() != p {
                                        pixels.push(p);
                                    }
                                }
                                lines.push(Polyline { pixels, start: i, end: j });
                            }
                        }
                        None if tracer.visited.contains(&first) => {}
                        None => {
                            let line = tracer.walk(i, origin, first, &criticals);
                            lines.push(line);
                        }
                    }
                }
            }
            i += 1;
        }
        // dead ends become endpoints
        let mut added = false;
        for line in lines.iter_mut().filter(|l| l.end == usize::MAX) {
            let p = *line.pixels.last().unwrap();
            criticals.push(RawCriticalPoint { pixel: p, kind: CriticalKind::Endpoint, cluster: vec![p], angle: None });
            line.end = criticals.len() - 1;
            tracer.owner.insert(p, line.end);
            added = true;
        }
        if added {
            continue;
        }
        // remaining pixels belong to loops with no critical point
        let anchor = skel.on_pixels().find(|p| !tracer.visited.contains(p) && !tracer.owner.contains_key(p));
        match anchor {
            Some(p) => {
                criticals.push(RawCriticalPoint { pixel: p, kind: CriticalKind::LoopAnchor, cluster: vec![p], angle: None });
                tracer.owner.insert(p, criticals.len() - 1);
            }
            None => break,
        }
    }
    (lines, criticals)
}

/// Removes endpoint branches shorter than `min_length` pixels that end in a
/// junction. Branches joining two endpoints are kept whatever their length.
pub fn prune_spurs(skel: &Bitmap, min_length: usize) -> Bitmap {
    let mut out = skel.clone();
    if min_length == 0 {
        return out;
    }
    for start in skel.on_pixels().filter(|&p| skel.neighbor_count(p) == 1) {
        let mut branch = vec![start];
        let mut prev = start;
        let mut cur = start;
        let reached_junction = loop {
            let next: Vec<Pixel> = skel.neighbors(cur).filter(|&q| q != prev && !branch.contains(&q)).collect();
            match next.len() {
                0 => break false,
                1 if skel.neighbor_count(next[0]) <= 2 => {
                    prev = cur;
                    cur = next[0];
                    branch.push(cur);
                    if branch.len() > min_length {
                        break false;
                    }
                }
                _ => break true,
            }
        };
        if reached_junction && branch.len() < min_length {
            for p in branch {
                out.set(p, false);
            }
        }
    }
    out
}

/// Drops 8-connected components with fewer than `min_pixels` pixels, unless
/// that would leave nothing.
pub fn remove_small_components(skel: &Bitmap, min_pixels: usize) -> Bitmap {
    let comps = skel.components();
    if comps.iter().all(|c| c.len() < min_pixels) {
        return skel.clone();
    }
    let mut out = skel.clone();
    for c in comps.iter().filter(|c| c.len() < min_pixels) {
        for &p in c {
            out.set(p, false);
        }
    }
    out
}
