//! IDX files (the MNIST container format), optionally gzip-compressed.

use std::io::Read;
use std::path::Path;

use flate2::read::GzDecoder;

use super::HarnessError;
use crate::vectorize::Raster;

const IMAGES_MAGIC: u32 = 0x0000_0803;
const LABELS_MAGIC: u32 = 0x0000_0801;

/// Images and labels from a pair of IDX files.
#[derive(Clone, Debug, PartialEq)]
pub struct IdxDataset {
    pub images: Vec<Raster>,
    pub labels: Vec<u8>,
}

fn read_file(path: &Path) -> Result<Vec<u8>, HarnessError> {
    let raw = std::fs::read(path).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
    if raw.starts_with(&[0x1f, 0x8b]) {
        let mut out = Vec::new();
        GzDecoder::new(raw.as_slice())
            .read_to_end(&mut out)
            .map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
        Ok(out)
    } else {
        Ok(raw)
    }
}

fn be_u32(bytes: &[u8], at: usize) -> Result<u32, HarnessError> {
    bytes
        .get(at..at + 4)
        .map(|b| u32::from_be_bytes([b[0], b[1], b[2], b[3]]))
        .ok_or(HarnessError::TruncatedFile)
}

pub fn parse_images(bytes: &[u8]) -> Result<Vec<Raster>, HarnessError> {
    let magic = be_u32(bytes, 0)?;
    if magic != IMAGES_MAGIC {
        return Err(HarnessError::BadMagic { expected: IMAGES_MAGIC, found: magic });
    }
    let count = be_u32(bytes, 4)? as usize;
    let rows = be_u32(bytes, 8)? as usize;
    let cols = be_u32(bytes, 12)? as usize;
    let size = rows * cols;
    let body = &bytes[16..];
    if body.len() < count * size {
        return Err(HarnessError::TruncatedFile);
    }
    Ok(body.chunks_exact(size.max(1)).take(count).map(|px| Raster::from_pixels(cols, rows, px.to_vec())).collect())
}

pub fn parse_labels(bytes: &[u8]) -> Result<Vec<u8>, HarnessError> {
    let magic = be_u32(bytes, 0)?;
    if magic != LABELS_MAGIC {
        return Err(HarnessError::BadMagic { expected: LABELS_MAGIC, found: magic });
    }
    let count = be_u32(bytes, 4)? as usize;
    let body = &bytes[8..];
    if body.len() < count {
        return Err(HarnessError::TruncatedFile);
    }
    Ok(body[..count].to_vec())
}

/// Loads an image file and its label file; both may be gzip-compressed.
pub fn load_idx(images_path: &Path, labels_path: &Path) -> Result<IdxDataset, HarnessError> {
    let images = parse_images(&read_file(images_path)?)?;
    let labels = parse_labels(&read_file(labels_path)?)?;
    if images.len() != labels.len() {
        return Err(HarnessError::CountMismatch { images: images.len(), labels: labels.len() });
    }
    Ok(IdxDataset { images, labels })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn image_file(count: u32, rows: u32, cols: u32, body: usize) -> Vec<u8> {
        let mut b = Vec::new();
        for v in [IMAGES_MAGIC, count, rows, cols] {
            b.extend_from_slice(&v.to_be_bytes());
        }
        b.extend((0..body).map(|i| i as u8));
        b
    }

    #[test]
    fn header_fields_are_honored() {
        let imgs = parse_images(&image_file(2, 3, 4, 24)).unwrap();
        assert_eq!(imgs.len(), 2);
        assert_eq!((imgs[1].width, imgs[1].height), (4, 3));
        assert_eq!(imgs[1].get(0, 0), 12);
    }

    #[test]
    fn wrong_magic() {
        let mut f = image_file(1, 2, 2, 4);
        f[3] = 0x01;
        assert_eq!(parse_images(&f), Err(HarnessError::BadMagic { expected: IMAGES_MAGIC, found: 0x801 }));
        assert!(matches!(parse_labels(&image_file(1, 1, 1, 1)), Err(HarnessError::BadMagic { .. })));
    }

    #[test]
    fn truncated() {
        assert_eq!(parse_images(&image_file(2, 3, 4, 23)), Err(HarnessError::TruncatedFile));
        assert_eq!(parse_images(&[0, 0, 8]), Err(HarnessError::TruncatedFile));
    }

    #[test]
    fn count_mismatch() {
        let dir = std::env::temp_dir().join(format!("idx-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let (ip, lp) = (dir.join("i"), dir.join("l"));
        std::fs::write(&ip, image_file(2, 1, 1, 2)).unwrap();
        let mut labels = LABELS_MAGIC.to_be_bytes().to_vec();
        labels.extend_from_slice(&3u32.to_be_bytes());
        labels.extend_from_slice(&[1, 2, 3]);
        std::fs::write(&lp, labels).unwrap();
        assert_eq!(load_idx(&ip, &lp), Err(HarnessError::CountMismatch { images: 2, labels: 3 }));
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
