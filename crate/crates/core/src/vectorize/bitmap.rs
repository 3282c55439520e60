use super::VectorizeError;
use crate::Scalar;

/// 8-bit grayscale raster, row-major, bright strokes on a dark background.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Raster {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

impl Raster {
    pub fn new(width: usize, height: usize) -> Self {
        Raster { width, height, pixels: vec![0; width * height] }
    }

    pub fn from_pixels(width: usize, height: usize, pixels: Vec<u8>) -> Self {
        assert_eq!(pixels.len(), width * height, "pixel buffer does not match dimensions");
        Raster { width, height, pixels }
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, v: u8) {
        self.pixels[y * self.width + x] = v;
    }

    /// Bilinear sample at a real-valued position; zero outside the raster.
    pub fn sample(&self, x: f64, y: f64) -> f64 {
        let (x0, y0) = (x.floor(), y.floor());
        let (fx, fy) = (x - x0, y - y0);
        let at = |xi: f64, yi: f64| -> f64 {
            if xi < 0.0 || yi < 0.0 || xi >= self.width as f64 || yi >= self.height as f64 {
                0.0
            } else {
                self.get(xi as usize, yi as usize) as f64
            }
        };
        let top = at(x0, y0) * (1.0 - fx) + at(x0 + 1.0, y0) * fx;
        let bottom = at(x0, y0 + 1.0) * (1.0 - fx) + at(x0 + 1.0, y0 + 1.0) * fx;
        top * (1.0 - fy) + bottom * fy
    }

    /// Upsamples by an integer factor with bilinear interpolation.
    pub fn upscaled(&self, factor: usize) -> Raster {
        let (w, h) = (self.width * factor, self.height * factor);
        let mut out = Raster::new(w, h);
        let f = factor as f64;
        for y in 0..h {
            for x in 0..w {
                // pixel centers line up with the source grid
                let sx = (x as f64 + 0.5) / f - 0.5;
                let sy = (y as f64 + 0.5) / f - 0.5;
                out.set(x, y, self.sample(sx, sy).round().clamp(0.0, 255.0) as u8);
            }
        }
        out
    }
}

/// Pixel position. Ordered row-major: by `y`, then `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pixel {
    pub y: i32,
    pub x: i32,
}

impl Pixel {
    pub fn new(x: i32, y: i32) -> Self {
        Pixel { y, x }
    }

    pub fn offset(self, dx: i32, dy: i32) -> Pixel {
        Pixel::new(self.x + dx, self.y + dy)
    }

    pub fn is_adjacent(self, other: Pixel) -> bool {
        self != other && (self.x - other.x).abs() <= 1 && (self.y - other.y).abs() <= 1
    }

    pub fn dist(self, other: Pixel) -> f64 {
        (((self.x - other.x).pow(2) + (self.y - other.y).pow(2)) as f64).sqrt()
    }
}

/// Clockwise 8-neighborhood starting north: N, NE, E, SE, S, SW, W, NW.
pub(crate) const RING: [(i32, i32); 8] = [(0, -1), (1, -1), (1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1)];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bitmap {
    pub width: usize,
    pub height: usize,
    bits: Vec<bool>,
}

impl Bitmap {
    pub fn new(width: usize, height: usize) -> Self {
        Bitmap { width, height, bits: vec![false; width * height] }
    }

    /// Builds a bitmap from rows of `#` (on) and anything else (off).
    pub fn from_ascii(rows: &[&str]) -> Self {
        let height = rows.len();
        let width = rows.iter().map(|r| r.len()).max().unwrap_or(0);
        let mut b = Bitmap::new(width, height);
        for (y, row) in rows.iter().enumerate() {
            for (x, c) in row.chars().enumerate() {
                if c == '#' {
                    b.set(Pixel::new(x as i32, y as i32), true);
                }
            }
        }
        b
    }

    pub fn to_ascii(&self) -> Vec<String> {
        (0..self.height)
            .map(|y| (0..self.width).map(|x| if self.get(Pixel::new(x as i32, y as i32)) { '#' } else { '.' }).collect())
            .collect()
    }

    fn index(&self, p: Pixel) -> Option<usize> {
        if p.x < 0 || p.y < 0 || p.x as usize >= self.width || p.y as usize >= self.height {
            None
        } else {
            Some(p.y as usize * self.width + p.x as usize)
        }
    }

    pub fn get(&self, p: Pixel) -> bool {
        self.index(p).is_some_and(|i| self.bits[i])
    }

    pub fn set(&mut self, p: Pixel, on: bool) {
        if let Some(i) = self.index(p) {
            self.bits[i] = on;
        }
    }

    pub fn count_on(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// On pixels in row-major order.
    pub fn on_pixels(&self) -> impl Iterator<Item = Pixel> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| Pixel::new((i % self.width) as i32, (i / self.width) as i32))
    }

    /// On pixels among the 8 neighbors, clockwise from north.
    pub fn neighbors(&self, p: Pixel) -> impl Iterator<Item = Pixel> + '_ {
        RING.iter().map(move |&(dx, dy)| p.offset(dx, dy)).filter(|&q| self.get(q))
    }

    pub fn neighbor_count(&self, p: Pixel) -> usize {
        self.neighbors(p).count()
    }

    /// 8-connected components of on pixels, each sorted row-major.
    pub fn components(&self) -> Vec<Vec<Pixel>> {
        let mut seen = vec![false; self.bits.len()];
        let mut out = Vec::new();
        for p in self.on_pixels().collect::<Vec<_>>() {
            let i = self.index(p).unwrap();
            if seen[i] {
                continue;
            }
            seen[i] = true;
            let mut comp = vec![p];
            let mut stack = vec![p];
            while let Some(q) = stack.pop() {
                for r in self.neighbors(q).collect::<Vec<_>>() {
                    let j = self.index(r).unwrap();
                    if !seen[j] {
                        seen[j] = true;
                        comp.push(r);
                        stack.push(r);
                    }
                }
            }
            comp.sort();
            out.push(comp);
        }
        out
    }
}

/// A pixel is on when its intensity is at least `threshold` times the image
/// maximum. An all-black image yields an all-off bitmap.
pub fn binarize<F: Scalar>(image: &Raster, threshold: F) -> Result<Bitmap, VectorizeError> {
    if image.width == 0 || image.height == 0 || image.pixels.is_empty() {
        return Err(VectorizeError::EmptyImage);
    }
    let max = image.pixels.iter().copied().max().unwrap_or(0);
    let mut b = Bitmap::new(image.width, image.height);
    if max == 0 {
        return Ok(b);
    }
    let cut = threshold.as_f64() * max as f64;
    for y in 0..image.height {
        for x in 0..image.width {
            let v = image.get(x, y);
            if v > 0 && v as f64 >= cut {
                b.set(Pixel::new(x as i32, y as i32), true);
            }
        }
    }
    Ok(b)
}
