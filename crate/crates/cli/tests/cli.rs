use std::path::{Path, PathBuf};
use std::process::Command;

use contour_attractor::concept::init_concept;
use contour_attractor::vectorize::{vectorize, Raster, VectorizeConfig};
use contour_attractor::ConceptLibrary;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_contour-attractor"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("contour-attractor-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

/// Vertical bar, light on dark.
fn bar(x0: u32) -> image::GrayImage {
    image::GrayImage::from_fn(28, 28, |x, y| image::Luma([if (x0..x0 + 3).contains(&x) && (4..24).contains(&y) { 255 } else { 0 }]))
}

fn raster(img: &image::GrayImage) -> Raster {
    Raster::from_pixels(28, 28, img.as_raw().clone())
}

fn write_library(dir: &Path) -> PathBuf {
    let g = vectorize(&raster(&bar(12)), &VectorizeConfig::default()).unwrap();
    let mut lib = ConceptLibrary::new();
    lib.push(init_concept(&g, "1_1").unwrap(), "1").unwrap();
    let path = dir.join("library.json");
    std::fs::write(&path, lib.to_json()).unwrap();
    path
}

#[test]
fn vectorize_prints_graph_json() {
    let dir = scratch("vectorize");
    let png = dir.join("bar.png");
    bar(10).save(&png).unwrap();
    let out = bin().args(["vectorize", "--image"]).arg(&png).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["nodes"].as_array().unwrap().len(), 3);
}

#[test]
fn classify_with_explanation() {
    let dir = scratch("classify");
    let library = write_library(&dir);
    let png = dir.join("bar.png");
    bar(14).save(&png).unwrap();
    let out = bin()
        .args(["classify", "--budget-ms", "2000", "--explain", "--image"])
        .arg(&png)
        .arg("--library")
        .arg(&library)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"winner_class\": \"1\""), "{text}");
    assert!(text.contains("class 1 via concept 1_1"), "{text}");
}

#[test]
fn export_concepts_writes_dot_files() {
    let dir = scratch("export");
    let library = write_library(&dir);
    let out_dir = dir.join("dot");
    let status = bin().arg("export-concepts").arg("--library").arg(&library).arg("--out-dir").arg(&out_dir).status().unwrap();
    assert!(status.success());
    let dot = std::fs::read_to_string(out_dir.join("1_1.dot")).unwrap();
    assert!(dot.starts_with("graph"));
}

#[test]
fn missing_image_fails_cleanly() {
    let out = bin().args(["vectorize", "--image", "/nonexistent/x.png"]).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("reading"));
}
