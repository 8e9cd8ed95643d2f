//! Per-category likelihood histograms over normalized image position and
//! depth, estimated from example semantic depth images.

mod estimate;
mod example_set;

pub use estimate::{estimate_pdfs, estimate_raw};
pub use example_set::{load_example_set, write_example_set, ExampleSet, ExampleSetError};

use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PdfMode {
    /// Full (x, y, depth) histograms.
    Rgbd,
    /// Depth-free: behaves exactly like `Rgbd` with a single depth bin.
    Rgb2d,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PdfConfig {
    pub bins_x: usize,
    pub bins_y: usize,
    pub bins_d: usize,
    /// Depth range upper bound in meters; deeper samples clamp to the last bin.
    pub d_max: f64,
    pub mode: PdfMode,
    /// Spread each pixel's depth as a truncated Gaussian instead of a point
    /// mass. Compensates for sparse statistics when the example set is tiny.
    pub single_image_mode: bool,
    /// Gaussian sigma as a fraction of the depth-axis bin count.
    pub depth_sigma_frac: f64,
}

impl Default for PdfConfig {
    fn default() -> Self {
        PdfConfig {
            bins_x: 16,
            bins_y: 16,
            bins_d: 16,
            d_max: 10.0,
            mode: PdfMode::Rgbd,
            single_image_mode: false,
            depth_sigma_frac: 0.1,
        }
    }
}

impl PdfConfig {
    pub fn validate(&self) -> Result<(), PdfError> {
        if self.bins_x < 1 || self.bins_y < 1 || self.bins_d < 1 {
            return Err(PdfError::BadConfig("bin counts must be at least 1".into()));
        }
        if !(self.d_max > 0.0) {
            return Err(PdfError::BadConfig("d_max must be positive".into()));
        }
        if !(self.depth_sigma_frac > 0.0 && self.depth_sigma_frac < 1.0) {
            return Err(PdfError::BadConfig(
                "depth_sigma_frac must lie in (0, 1)".into(),
            ));
        }
        Ok(())
    }

    /// Depth bins actually stored: the depth-free mode collapses the axis.
    pub fn effective_bins_d(&self) -> usize {
        match self.mode {
            PdfMode::Rgbd => self.bins_d,
            PdfMode::Rgb2d => 1,
        }
    }

    pub fn bins_per_category(&self) -> usize {
        self.bins_x * self.bins_y * self.effective_bins_d()
    }

    pub fn x_bin(&self, x: f64) -> usize {
        ((x * self.bins_x as f64) as usize).min(self.bins_x - 1)
    }

    pub fn y_bin(&self, y: f64) -> usize {
        ((y * self.bins_y as f64) as usize).min(self.bins_y - 1)
    }

    pub fn depth_bin(&self, d: f64) -> usize {
        let b = self.effective_bins_d();
        if b == 1 {
            return 0;
        }
        let raw = (d / self.d_max * b as f64).floor();
        (raw.max(0.0) as usize).min(b - 1)
    }

    pub fn flat_index(&self, xb: usize, yb: usize, db: usize) -> usize {
        (xb * self.bins_y + yb) * self.effective_bins_d() + db
    }
}

#[derive(Debug, Error)]
pub enum PdfError {
    #[error("invalid pdf config: {0}")]
    BadConfig(String),
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
    #[error("unsupported pdf file version {0}")]
    Version(u32),
}

/// ℓ1-normalized per-category histograms f_c(x, y, d), plus the per-category
/// depth marginals used by voxel weighting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryPdfSet {
    config: PdfConfig,
    /// Per category: flat (x, y, d) histogram, depth contiguous.
    hists: Vec<Vec<f64>>,
    /// Per category: pixels observed during estimation.
    observations: Vec<u64>,
    /// Per category: sum of each depth slice, precomputed at construction.
    depth_marginals: Vec<Vec<f64>>,
}

impl CategoryPdfSet {
    pub(crate) fn from_normalized(
        config: PdfConfig,
        hists: Vec<Vec<f64>>,
        observations: Vec<u64>,
    ) -> Self {
        let bd = config.effective_bins_d();
        let depth_marginals = hists
            .iter()
            .map(|h| {
                let mut m = vec![0.0; bd];
                for (i, &v) in h.iter().enumerate() {
                    m[i % bd] += v;
                }
                m
            })
            .collect();
        CategoryPdfSet {
            config,
            hists,
            observations,
            depth_marginals,
        }
    }

    pub fn config(&self) -> &PdfConfig {
        &self.config
    }

    pub fn category_count(&self) -> usize {
        self.hists.len()
    }

    /// Categories never observed in the example set stay all-zero.
    pub fn is_empty_category(&self, c: u8) -> bool {
        self.observations[c as usize] == 0
    }

    pub fn observations(&self, c: u8) -> u64 {
        self.observations[c as usize]
    }

    pub fn histogram(&self, c: u8) -> &[f64] {
        &self.hists[c as usize]
    }

    /// Bin value at (x, y, d); x and y are normalized image coordinates in
    /// [0, 1), d is meters (clamping into the depth range).
    pub fn likelihood(&self, c: u8, x: f64, y: f64, d: f64) -> f64 {
        let idx = self
            .config
            .flat_index(self.config.x_bin(x), self.config.y_bin(y), self.config.depth_bin(d));
        self.hists[c as usize][idx]
    }

    /// Sum of the whole depth slice containing `d`: Σ_x Σ_y f_c(x, y, d).
    pub fn depth_marginal(&self, c: u8, d: f64) -> f64 {
        self.depth_marginals[c as usize][self.config.depth_bin(d)]
    }

    pub fn save(&self, path: &Path) -> Result<(), PdfError> {
        let file = PdfFile {
            version: PDF_FILE_VERSION,
            pdfs: self.clone(),
        };
        let text = serde_json::to_string(&file).expect("pdf serialization cannot fail");
        std::fs::write(path, text).map_err(|source| PdfError::Write {
            path: path.to_owned(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<CategoryPdfSet, PdfError> {
        let text = std::fs::read_to_string(path).map_err(|source| PdfError::Read {
            path: path.to_owned(),
            source,
        })?;
        let file: PdfFile = serde_json::from_str(&text).map_err(|source| PdfError::Parse {
            path: path.to_owned(),
            source,
        })?;
        if file.version != PDF_FILE_VERSION {
            return Err(PdfError::Version(file.version));
        }
        Ok(file.pdfs)
    }
}

const PDF_FILE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct PdfFile {
    version: u32,
    pdfs: CategoryPdfSet,
}
