//! Distribution distance between two view sets.
//!
//! Every labeled pixel of a view projects onto three axes: normalized image
//! x, normalized image y, and metric depth. Per category and axis the pixels
//! form a 1D histogram; the distance between two view sets is the mean
//! thresholded earth mover's distance over those histograms.

pub mod transport;

pub use transport::{emd_classic_1d, emd_thresholded, transportation_oracle, EmdError};

use crate::categories::{CategoryTable, BACKGROUND};
use crate::scene::SemanticDepthImage;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Depth,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Depth];

    pub fn label(self) -> &'static str {
        match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Depth => "depth",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct EmdConfig {
    pub bins: usize,
    pub threshold: f64,
    pub d_max: f64,
}

impl Default for EmdConfig {
    fn default() -> Self {
        EmdConfig { bins: 32, threshold: 3.0, d_max: 10.0 }
    }
}

/// Pixel counts of one category along one axis, ℓ1-normalized once any
/// pixel was seen. `pixels == 0` marks the category absent on this side.
#[derive(Debug, Clone)]
pub struct AxisHistogram {
    pub category: u8,
    pub axis: Axis,
    pub bins: Vec<f64>,
    pub pixels: u64,
}

fn bin_of(value: f64, bins: usize) -> usize {
    // value is pre-normalized to [0, 1); out-of-range values clamp.
    let raw = (value * bins as f64).floor();
    (raw.max(0.0) as usize).min(bins - 1)
}

/// Builds one histogram per category over `axis`. Depth beyond `d_max`
/// (including missing depth) lands in the last bin.
pub fn axis_histograms(
    images: &[SemanticDepthImage],
    n_categories: usize,
    axis: Axis,
    bins: usize,
    d_max: f64,
) -> Vec<AxisHistogram> {
    let mut counts = vec![vec![0.0f64; bins]; n_categories];
    let mut pixels = vec![0u64; n_categories];
    for img in images {
        for py in 0..img.height {
            for px in 0..img.width {
                let idx = img.idx(px, py);
                let c = img.category[idx];
                if c == BACKGROUND || (c as usize) >= n_categories {
                    continue;
                }
                let bin = match axis {
                    Axis::X => bin_of(px as f64 / img.width as f64, bins),
                    Axis::Y => bin_of(py as f64 / img.height as f64, bins),
                    Axis::Depth => {
                        let d = img.depth[idx];
                        if d.is_finite() {
                            bin_of(d / d_max, bins)
                        } else {
                            bins - 1
                        }
                    }
                };
                counts[c as usize][bin] += 1.0;
                pixels[c as usize] += 1;
            }
        }
    }
    counts
        .into_iter()
        .zip(pixels)
        .enumerate()
        .map(|(c, (mut bins_vec, n))| {
            if n > 0 {
                let total = n as f64;
                bins_vec.iter_mut().for_each(|v| *v /= total);
            }
            AxisHistogram { category: c as u8, axis, bins: bins_vec, pixels: n }
        })
        .collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CategoryAxisEmd {
    pub category: u8,
    pub name: String,
    pub axis: Axis,
    pub emd: f64,
    /// The category appeared in only one of the two sets; the distance is
    /// the maximal 1.0 by convention rather than a transport solution.
    pub one_sided: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmdReport {
    pub bins: usize,
    pub threshold: f64,
    pub d_max: f64,
    pub entries: Vec<CategoryAxisEmd>,
    pub axis_means: AxisMeans,
    pub grand_mean: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AxisMeans {
    pub x: f64,
    pub y: f64,
    pub depth: f64,
}

impl AxisMeans {
    pub fn get(&self, axis: Axis) -> f64 {
        match axis {
            Axis::X => self.x,
            Axis::Y => self.y,
            Axis::Depth => self.depth,
        }
    }
}

impl EmdReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("category,axis,emd\n");
        for e in &self.entries {
            out.push_str(&format!("{},{},{:.6}\n", e.name, e.axis.label(), e.emd));
        }
        for axis in Axis::ALL {
            out.push_str(&format!("mean,{},{:.6}\n", axis.label(), self.axis_means.get(axis)));
        }
        out.push_str(&format!("mean,all,{:.6}\n", self.grand_mean));
        out
    }
}

/// Scores `generated` against `reference`. Categories absent from both sets
/// are excluded; categories present on one side only contribute 1.0 on
/// every axis. Transport costs are divided by the threshold so every entry
/// lies in [0, 1].
pub fn evaluate_sets(
    generated: &[SemanticDepthImage],
    reference: &[SemanticDepthImage],
    table: &CategoryTable,
    cfg: &EmdConfig,
) -> Result<EmdReport, EmdError> {
    let n = table.names().len();
    let mut entries = Vec::new();
    let mut sums = [0.0f64; 3];
    let mut counts = [0usize; 3];
    for (ai, axis) in Axis::ALL.into_iter().enumerate() {
        let gen_h = axis_histograms(generated, n, axis, cfg.bins, cfg.d_max);
        let ref_h = axis_histograms(reference, n, axis, cfg.bins, cfg.d_max);
        for c in 0..n {
            let g = &gen_h[c];
            let r = &ref_h[c];
            if g.pixels == 0 && r.pixels == 0 {
                continue;
            }
            let (emd, one_sided) = if g.pixels == 0 || r.pixels == 0 {
                (1.0, true)
            } else {
                let raw = emd_thresholded(&g.bins, &r.bins, cfg.threshold)?;
                (raw / cfg.threshold, false)
            };
            sums[ai] += emd;
            counts[ai] += 1;
            entries.push(CategoryAxisEmd {
                category: c as u8,
                name: table.name(c as u8).to_string(),
                axis,
                emd,
                one_sided,
            });
        }
    }
    // A category has pixels on an axis iff it has pixels at all, so the
    // three axes agree on emptiness; one empty axis means all are.
    if counts.iter().any(|&c| c == 0) {
        return Err(EmdError::Lp("no category present in either set".into()));
    }
    let per_axis: Vec<f64> = (0..3).map(|i| sums[i] / counts[i] as f64).collect();
    entries.sort_by_key(|e| (e.category, e.axis as u8));
    Ok(EmdReport {
        bins: cfg.bins,
        threshold: cfg.threshold,
        d_max: cfg.d_max,
        entries,
        axis_means: AxisMeans { x: per_axis[0], y: per_axis[1], depth: per_axis[2] },
        grand_mean: per_axis.iter().sum::<f64>() / 3.0,
    })
}
