//! Histogram estimation from example images.

use super::{CategoryPdfSet, ExampleSet, PdfConfig, PdfError};
use crate::categories::BACKGROUND;
use statrs::function::erf::erf;

fn normal_cdf(z: f64) -> f64 {
    0.5 * (1.0 + erf(z / std::f64::consts::SQRT_2))
}

/// Per-depth-bin masses of a unit deposit at depth `d`: a Gaussian centered
/// on the sample's (fractional) bin coordinate, truncated to the depth axis
/// and renormalized so every pixel contributes total mass 1.
fn gaussian_depth_deposit(cfg: &PdfConfig, d: f64, out: &mut [f64]) {
    let b = cfg.effective_bins_d();
    debug_assert_eq!(out.len(), b);
    let mu = (d / cfg.d_max * b as f64).clamp(0.0, b as f64);
    let sigma = cfg.depth_sigma_frac * b as f64;
    let total = normal_cdf((b as f64 - mu) / sigma) - normal_cdf(-mu / sigma);
    let mut lo = normal_cdf(-mu / sigma);
    for (k, slot) in out.iter_mut().enumerate() {
        let hi = normal_cdf((k as f64 + 1.0 - mu) / sigma);
        *slot = (hi - lo) / total;
        lo = hi;
    }
}

/// Unnormalized per-category histograms plus per-category pixel counts.
/// Every counted pixel deposits total mass 1, as a point mass or (in
/// single-image mode) a truncated Gaussian along depth.
pub fn estimate_raw(examples: &ExampleSet, cfg: &PdfConfig) -> (Vec<Vec<f64>>, Vec<u64>) {
    let n = examples.categories.len();
    let bd = cfg.effective_bins_d();
    let mut hists = vec![vec![0.0f64; cfg.bins_per_category()]; n];
    let mut observations = vec![0u64; n];
    let mut deposit = vec![0.0f64; bd];
    for img in &examples.images {
        for py in 0..img.height {
            for px in 0..img.width {
                let idx = img.idx(px, py);
                let c = img.category[idx];
                if c == BACKGROUND {
                    continue;
                }
                let xb = cfg.x_bin(px as f64 / img.width as f64);
                let yb = cfg.y_bin(py as f64 / img.height as f64);
                let d = img.depth[idx];
                observations[c as usize] += 1;
                let hist = &mut hists[c as usize];
                if cfg.single_image_mode {
                    gaussian_depth_deposit(cfg, d, &mut deposit);
                    let base = cfg.flat_index(xb, yb, 0);
                    for (k, &m) in deposit.iter().enumerate() {
                        hist[base + k] += m;
                    }
                } else {
                    hist[cfg.flat_index(xb, yb, cfg.depth_bin(d))] += 1.0;
                }
            }
        }
    }
    (hists, observations)
}

/// Estimates the ℓ1-normalized per-category likelihood histograms.
pub fn estimate_pdfs(examples: &ExampleSet, cfg: &PdfConfig) -> Result<CategoryPdfSet, PdfError> {
    cfg.validate()?;
    let (mut hists, observations) = estimate_raw(examples, cfg);
    for hist in &mut hists {
        let total: f64 = hist.iter().sum();
        if total > 0.0 {
            for v in hist.iter_mut() {
                *v /= total;
            }
        }
    }
    Ok(CategoryPdfSet::from_normalized(*cfg, hists, observations))
}
