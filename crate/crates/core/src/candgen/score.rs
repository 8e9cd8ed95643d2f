//! Candidate image scoring and top-slice filtering.

use super::{Candidate, GenConfig};
use crate::categories::{CategoryWeights, BACKGROUND};
use crate::pdf::CategoryPdfSet;
use crate::scene::SemanticDepthImage;

#[derive(Debug, Clone, PartialEq)]
pub struct CandidateScore {
    /// Per category: w_c times the likelihood sum of that category's pixels,
    /// divided by the pixel count unless frequency division is off. Absent
    /// categories stay 0.
    pub vector: Vec<f64>,
    /// Unweighted, undivided likelihood sum over every labeled pixel.
    pub whole_image: f64,
}

pub fn score_candidate(
    img: &SemanticDepthImage,
    pdfs: &CategoryPdfSet,
    weights: &CategoryWeights,
    cfg: &GenConfig,
) -> CandidateScore {
    let n = weights.len();
    let mut sums = vec![0.0f64; n];
    let mut counts = vec![0u64; n];
    for py in 0..img.height {
        for px in 0..img.width {
            let idx = img.idx(px, py);
            let c = img.category[idx];
            if c == BACKGROUND {
                continue;
            }
            let x = px as f64 / img.width as f64;
            let y = py as f64 / img.height as f64;
            sums[c as usize] += pdfs.likelihood(c, x, y, img.depth[idx]);
            counts[c as usize] += 1;
        }
    }
    let whole_image = sums.iter().sum();
    let vector = (0..n)
        .map(|c| {
            if counts[c] == 0 {
                0.0
            } else if cfg.divide_by_observation_frequency {
                weights.get(c as u8) * sums[c] / counts[c] as f64
            } else {
                weights.get(c as u8) * sums[c]
            }
        })
        .collect();
    CandidateScore { vector, whole_image }
}

/// Top `keep` candidates by aggregate score, descending; ties go to the
/// smaller id, making the slice deterministic.
pub fn filter_top(mut cands: Vec<Candidate>, keep: usize) -> Vec<Candidate> {
    cands.sort_by(|a, b| {
        b.aggregate
            .total_cmp(&a.aggregate)
            .then_with(|| a.id.cmp(&b.id))
    });
    cands.truncate(keep);
    cands
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::categories::CategoryTable;
    use crate::geom::Vec3;
    use crate::pdf::{estimate_pdfs, ExampleSet, PdfConfig};
    use crate::scene::Camera;

    fn uniform_image(w: u32, h: u32, cat: u8, d: f64) -> SemanticDepthImage {
        let n = (w * h) as usize;
        SemanticDepthImage {
            width: w,
            height: h,
            category: vec![cat; n],
            depth: vec![d; n],
        }
    }

    /// Pdfs whose category-3 histogram is a single full-mass bin covering
    /// the entire image plane at depths around 1 m.
    fn concentrated_pdfs() -> CategoryPdfSet {
        let set = ExampleSet {
            name: "t".into(),
            categories: CategoryTable::nyu40(),
            images: vec![uniform_image(4, 4, 3, 1.0)],
        };
        let cfg = PdfConfig {
            bins_x: 1,
            bins_y: 1,
            bins_d: 4,
            d_max: 4.0,
            ..PdfConfig::default()
        };
        estimate_pdfs(&set, &cfg).unwrap()
    }

    #[test]
    fn mean_of_unit_likelihoods_is_one() {
        let pdfs = concentrated_pdfs();
        let weights = CategoryWeights::uniform(40);
        let cfg = GenConfig::default();
        for (w, h) in [(2, 2), (8, 6), (80, 60)] {
            let img = uniform_image(w, h, 3, 1.2);
            let score = score_candidate(&img, &pdfs, &weights, &cfg);
            assert!((score.vector[3] - 1.0).abs() < 1e-12, "at {w}x{h}");
            assert!((score.whole_image - (w * h) as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn division_off_scales_with_pixel_count() {
        let pdfs = concentrated_pdfs();
        let weights = CategoryWeights::uniform(40);
        let cfg = GenConfig {
            divide_by_observation_frequency: false,
            ..GenConfig::default()
        };
        let img = uniform_image(8, 6, 3, 1.2);
        let score = score_candidate(&img, &pdfs, &weights, &cfg);
        assert!((score.vector[3] - 48.0).abs() < 1e-12);
    }

    #[test]
    fn all_background_scores_zero() {
        let pdfs = concentrated_pdfs();
        let img = SemanticDepthImage::new(8, 6);
        let score = score_candidate(&img, &pdfs, &CategoryWeights::uniform(40), &GenConfig::default());
        assert!(score.vector.iter().all(|&v| v == 0.0));
        assert_eq!(score.whole_image, 0.0);
    }

    #[test]
    fn category_weight_scales_its_entry() {
        let pdfs = concentrated_pdfs();
        let mut w = vec![1.0; 40];
        w[3] = 2.5;
        let weights = CategoryWeights::new(w);
        let img = uniform_image(4, 4, 3, 1.2);
        let score = score_candidate(&img, &pdfs, &weights, &GenConfig::default());
        assert!((score.vector[3] - 2.5).abs() < 1e-12);
        // The whole-image sum stays unweighted.
        assert!((score.whole_image - 16.0).abs() < 1e-9);
    }

    fn cand(id: u64, aggregate: f64) -> Candidate {
        Candidate {
            id,
            room: "r".into(),
            camera: Camera::new(Vec3::ZERO, 0.0, 0.0, 0.0, 1.0, 1.0),
            vector: vec![aggregate],
            aggregate,
            whole_image: 0.0,
        }
    }

    #[test]
    fn filter_orders_and_truncates() {
        let got = filter_top(vec![cand(0, 5.0), cand(1, 1.0), cand(2, 9.0)], 2);
        let ids: Vec<u64> = got.iter().map(|c| c.id).collect();
        assert_eq!(ids, vec![2, 0]);
    }

    #[test]
    fn filter_keep_beyond_len_sorts_all() {
        let got = filter_top(vec![cand(0, 1.0), cand(1, 3.0)], 10);
        let ids: Vec<u64> = got.iter().map(|c| c.id).collect();
        assert_eq!(ids, vec![1, 0]);
    }

    #[test]
    fn filter_breaks_ties_by_lower_id() {
        let got = filter_top(vec![cand(4, 2.0), cand(1, 2.0), cand(3, 2.0)], 2);
        let ids: Vec<u64> = got.iter().map(|c| c.id).collect();
        assert_eq!(ids, vec![1, 3]);
    }
}
