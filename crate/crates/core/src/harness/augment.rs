use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::vectorize::Raster;

/// Ranges for random affine variants of a training image.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AugmentConfig {
    /// Variants generated per base sample.
    pub count: usize,
    pub seed: u64,
    /// Rotation drawn from `[-rotation_deg, rotation_deg]`.
    pub rotation_deg: f64,
    /// Shift per axis drawn from `[-translation_px, translation_px]`.
    pub translation_px: f64,
    pub scale_min: f64,
    pub scale_max: f64,
}

impl Default for AugmentConfig {
    fn default() -> Self {
        AugmentConfig { count: 10, seed: 7, rotation_deg: 10.0, translation_px: 2.0, scale_min: 0.9, scale_max: 1.1 }
    }
}

/// Rotates, scales (about the image center) and shifts, sampling the source bilinearly.
pub fn affine(image: &Raster, rotation_deg: f64, scale: f64, tx: f64, ty: f64) -> Raster {
    let mut out = Raster::new(image.width, image.height);
    let (cx, cy) = ((image.width as f64 - 1.0) / 2.0, (image.height as f64 - 1.0) / 2.0);
    let (sin, cos) = rotation_deg.to_radians().sin_cos();
    for y in 0..image.height {
        for x in 0..image.width {
            // inverse map: undo the shift, then the scale, then the rotation
            let (dx, dy) = ((x as f64 - cx - tx) / scale, (y as f64 - cy - ty) / scale);
            let (sx, sy) = (cos * dx + sin * dy + cx, -sin * dx + cos * dy + cy);
            out.set(x, y, image.sample(sx, sy).round().clamp(0.0, 255.0) as u8);
        }
    }
    out
}

/// `n_variants` random affine copies of `sample`, reproducible from `seed`.
pub fn augment(sample: &Raster, n_variants: usize, seed: u64, cfg: &AugmentConfig) -> Vec<Raster> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |lo: f64, hi: f64| if hi > lo { rng.random_range(lo..=hi) } else { lo };
    (0..n_variants)
        .map(|_| {
            let rot = draw(-cfg.rotation_deg, cfg.rotation_deg);
            let scale = draw(cfg.scale_min, cfg.scale_max);
            let tx = draw(-cfg.translation_px, cfg.translation_px);
            let ty = draw(-cfg.translation_px, cfg.translation_px);
            affine(sample, rot, scale, tx, ty)
        })
        .collect()
}
