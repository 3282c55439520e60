use super::bitmap::Pixel;
use super::critical::{CriticalKind, Polyline, RawCriticalPoint};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Corner {
    /// Index into the polyline's pixels.
    pub index: usize,
    /// Interior angle, radians (pi for a straight continuation).
    pub angle: f64,
}

fn turning_angle(a: Pixel, b: Pixel, c: Pixel) -> Option<f64> {
    let (ux, uy) = ((b.x - a.x) as f64, (b.y - a.y) as f64);
    let (vx, vy) = ((c.x - b.x) as f64, (c.y - b.y) as f64);
    let (nu, nv) = ((ux * ux + uy * uy).sqrt(), (vx * vx + vy * vy).sqrt());
    if nu == 0.0 || nv == 0.0 {
        return None;
    }
    Some(((ux * vx + uy * vy) / (nu * nv)).clamp(-1.0, 1.0).acos())
}

/// Finds sharp direction changes along a polyline.
///
/// At each pixel the turning angle between the `window`-pixel arms on either
/// side is measured; runs of pixels above `angle_threshold_deg` contribute
/// their sharpest pixel. Corners keep `window` pixels away from the ends and
/// from each other.
pub fn detect_corners(pixels: &[Pixel], angle_threshold_deg: f64, window: usize) -> Vec<Corner> {
    let k = window.max(1);
    if pixels.len() < 3 || pixels.len() < 2 * k + 1 {
        return Vec::new();
    }
    let threshold = angle_threshold_deg.to_radians();
    let turning: Vec<Option<f64>> = (0..pixels.len())
        .map(|i| {
            if i < k || i + k >= pixels.len() {
                None
            } else {
                turning_angle(pixels[i - k], pixels[i], pixels[i + k])
            }
        })
        .collect();

    let mut corners: Vec<Corner> = Vec::new();
    let mut i = 0;
    while i < pixels.len() {
        if !turning[i].is_some_and(|t| t > threshold) {
            i += 1;
            continue;
        }
        let mut best = i;
        let mut j = i;
        while j < pixels.len() && turning[j].is_some_and(|t| t > threshold) {
            if turning[j].unwrap() > turning[best].unwrap() {
                best = j;
            }
            j += 1;
        }
        let too_close = corners.last().is_some_and(|c| best - c.index < k);
        if !too_close {
            corners.push(Corner { index: best, angle: std::f64::consts::PI - turning[best].unwrap() });
        }
        i = j;
    }
    corners
}

/// Interior angle at pixel `i`, with arms clamped to the polyline ends.
fn angle_at(pixels: &[Pixel], i: usize, window: usize) -> f64 {
    let k = window.min(i).min(pixels.len() - 1 - i).max(1);
    if i < k || i + k >= pixels.len() {
        return std::f64::consts::PI;
    }
    turning_angle(pixels[i - k], pixels[i], pixels[i + k]).map_or(std::f64::consts::PI, |t| std::f64::consts::PI - t)
}

/// Splits every polyline at its corners, appending the corners to the
/// critical list. A closed polyline with no corner is split at the pixel
/// farthest from its anchor so no line starts and ends at the same point.
pub fn split_at_corners(
    lines: &[Polyline],
    criticals: &[RawCriticalPoint],
    angle_threshold_deg: f64,
    window: usize,
) -> (Vec<Polyline>, Vec<RawCriticalPoint>) {
    let mut criticals = criticals.to_vec();
    let mut out = Vec::new();
    for line in lines {
        let mut corners = detect_corners(&line.pixels, angle_threshold_deg, window);
        if corners.is_empty() && line.is_closed() && line.pixels.len() >= 3 {
            let anchor = line.pixels[0];
            let far = (1..line.pixels.len() - 1)
                .max_by(|&a, &b| anchor.dist(line.pixels[a]).total_cmp(&anchor.dist(line.pixels[b])).then(b.cmp(&a)))
                .unwrap();
            corners.push(Corner { index: far, angle: angle_at(&line.pixels, far, window) });
        }
        let mut start = line.start;
        let mut from = 0;
        for c in corners {
            let p = line.pixels[c.index];
            criticals.push(RawCriticalPoint { pixel: p, kind: CriticalKind::Corner, cluster: vec![p], angle: Some(c.angle) });
            let id = criticals.len() - 1;
            out.push(Polyline { pixels: line.pixels[from..=c.index].to_vec(), start, end: id });
            start = id;
            from = c.index;
        }
        out.push(Polyline { pixels: line.pixels[from..].to_vec(), start, end: line.end });
    }
    (out, criticals)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(points: &[(i32, i32)]) -> Vec<Pixel> {
        // rasterize straight runs between the given vertices
        let mut out = vec![Pixel::new(points[0].0, points[0].1)];
        for w in points.windows(2) {
            let (mut x, mut y) = w[0];
            while (x, y) != w[1] {
                x += (w[1].0 - x).signum();
                y += (w[1].1 - y).signum();
                out.push(Pixel::new(x, y));
            }
        }
        out
    }

    #[test]
    fn straight_has_no_corner() {
        assert!(detect_corners(&path(&[(0, 0), (30, 0)]), 45.0, 5).is_empty());
        assert!(detect_corners(&path(&[(0, 0), (20, 20)]), 45.0, 5).is_empty());
    }

    #[test]
    fn right_angle_l() {
        let px = path(&[(0, 0), (0, 15), (15, 15)]);
        let corners = detect_corners(&px, 45.0, 5);
        assert_eq!(corners.len(), 1);
        assert_eq!(px[corners[0].index], Pixel::new(0, 15));
        let deg = corners[0].angle.to_degrees();
        assert!((deg - 90.0).abs() <= 10.0, "{deg}");
    }

    #[test]
    fn seven_stroke() {
        let px = path(&[(0, 0), (14, 0), (6, 18)]);
        assert!(!detect_corners(&px, 45.0, 5).is_empty());
    }

    #[test]
    fn short_polyline_has_no_corner() {
        assert!(detect_corners(&path(&[(0, 0), (2, 0)]), 45.0, 5).is_empty());
    }
}
