//! Example-set directories: a manifest plus paired category/depth rasters.

use super::PdfMode;
use crate::categories::{CategoryTable, BACKGROUND};
use crate::io::pgm::{read_pgm, write_pgm16, write_pgm8, PgmError};
use crate::scene::SemanticDepthImage;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExampleSetError {
    #[error("failed to read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("failed to write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("failed to parse {path}: {source}")]
    Parse {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error(transparent)]
    Pgm(#[from] PgmError),
    #[error("example set {0} lists no images")]
    Empty(PathBuf),
    #[error("{file}: expected {expected_w}x{expected_h}, got {got_w}x{got_h}")]
    SizeMismatch {
        file: PathBuf,
        expected_w: u32,
        expected_h: u32,
        got_w: u32,
        got_h: u32,
    },
    #[error("{file}: category id {value} outside table of {table_len}")]
    UnknownCategory {
        file: PathBuf,
        value: u16,
        table_len: usize,
    },
    #[error("image {index}: depth raster required in rgbd mode but not listed")]
    MissingDepth { index: usize },
}

/// Labeled images the pdfs are estimated from.
#[derive(Debug, Clone)]
pub struct ExampleSet {
    pub name: String,
    pub categories: CategoryTable,
    pub images: Vec<SemanticDepthImage>,
}

#[derive(Debug, Serialize, Deserialize)]
struct Manifest {
    width: u32,
    height: u32,
    mode: PdfMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    categories: Option<Vec<String>>,
    images: Vec<ManifestImage>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ManifestImage {
    category: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    depth: Option<String>,
}

/// Loads an example-set directory. `mode` is the consumer's intent: rgbd
/// requires a depth raster per image, the depth-free mode tolerates their
/// absence (any present depth rasters still load).
pub fn load_example_set(dir: &Path, mode: PdfMode) -> Result<ExampleSet, ExampleSetError> {
    let manifest_path = dir.join("manifest.json");
    let text = std::fs::read_to_string(&manifest_path).map_err(|source| ExampleSetError::Read {
        path: manifest_path.clone(),
        source,
    })?;
    let manifest: Manifest =
        serde_json::from_str(&text).map_err(|source| ExampleSetError::Parse {
            path: manifest_path,
            source,
        })?;
    if manifest.images.is_empty() {
        return Err(ExampleSetError::Empty(dir.to_owned()));
    }
    let categories = match manifest.categories {
        Some(names) => CategoryTable::new(names),
        None => CategoryTable::nyu40(),
    };
    let n = categories.len();
    let (w, h) = (manifest.width, manifest.height);
    let pixel_count = (w as usize) * (h as usize);

    let mut images = Vec::with_capacity(manifest.images.len());
    for (index, entry) in manifest.images.iter().enumerate() {
        let cat_path = dir.join(&entry.category);
        let cat_pgm = read_pgm(&cat_path)?;
        if (cat_pgm.width, cat_pgm.height) != (w, h) {
            return Err(ExampleSetError::SizeMismatch {
                file: cat_path,
                expected_w: w,
                expected_h: h,
                got_w: cat_pgm.width,
                got_h: cat_pgm.height,
            });
        }
        let mut category = Vec::with_capacity(pixel_count);
        for &s in &cat_pgm.samples {
            if s != BACKGROUND as u16 && s as usize >= n {
                return Err(ExampleSetError::UnknownCategory {
                    file: cat_path,
                    value: s,
                    table_len: n,
                });
            }
            category.push(s as u8);
        }

        let mut depth = vec![f64::INFINITY; pixel_count];
        match (&entry.depth, mode) {
            (None, PdfMode::Rgbd) => return Err(ExampleSetError::MissingDepth { index }),
            (None, PdfMode::Rgb2d) => {}
            (Some(name), _) => {
                let dep_path = dir.join(name);
                let dep_pgm = read_pgm(&dep_path)?;
                if (dep_pgm.width, dep_pgm.height) != (cat_pgm.width, cat_pgm.height) {
                    return Err(ExampleSetError::SizeMismatch {
                        file: dep_path,
                        expected_w: cat_pgm.width,
                        expected_h: cat_pgm.height,
                        got_w: dep_pgm.width,
                        got_h: dep_pgm.height,
                    });
                }
                for (i, &mm) in dep_pgm.samples.iter().enumerate() {
                    if category[i] != BACKGROUND {
                        depth[i] = mm as f64 / 1000.0;
                    }
                }
            }
        }
        images.push(SemanticDepthImage {
            width: w,
            height: h,
            category,
            depth,
        });
    }

    let name = dir
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    Ok(ExampleSet {
        name,
        categories,
        images,
    })
}

/// Writes images as an example-set directory (millimeter depth rasters,
/// depth capped at the u16 range; background depth stored as 0).
pub fn write_example_set(
    dir: &Path,
    images: &[SemanticDepthImage],
    categories: &CategoryTable,
    mode: PdfMode,
) -> Result<(), ExampleSetError> {
    assert!(!images.is_empty());
    let (w, h) = (images[0].width, images[0].height);
    std::fs::create_dir_all(dir).map_err(|source| ExampleSetError::Write {
        path: dir.to_owned(),
        source,
    })?;
    let mut entries = Vec::with_capacity(images.len());
    for (i, img) in images.iter().enumerate() {
        assert_eq!((img.width, img.height), (w, h), "uniform dimensions required");
        let cat_name = format!("{i:03}_cat.pgm");
        write_pgm8(&dir.join(&cat_name), w, h, &img.category)?;
        let depth_name = match mode {
            PdfMode::Rgbd => {
                let dep_name = format!("{i:03}_dep.pgm");
                let mm: Vec<u16> = img
                    .depth
                    .iter()
                    .map(|&d| {
                        if d.is_finite() {
                            (d * 1000.0).round().clamp(0.0, 65535.0) as u16
                        } else {
                            0
                        }
                    })
                    .collect();
                write_pgm16(&dir.join(&dep_name), w, h, &mm)?;
                Some(dep_name)
            }
            PdfMode::Rgb2d => None,
        };
        entries.push(ManifestImage {
            category: cat_name,
            depth: depth_name,
        });
    }
    let manifest = Manifest {
        width: w,
        height: h,
        mode,
        categories: Some(categories.names().to_vec()),
        images: entries,
    };
    let path = dir.join("manifest.json");
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serialization cannot fail");
    std::fs::write(&path, text).map_err(|source| ExampleSetError::Write { path, source })
}
