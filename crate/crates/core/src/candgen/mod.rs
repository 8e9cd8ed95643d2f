//! Candidate camera generation: weight a room's voxels by how well views
//! from them could match the example statistics, sample cameras from that
//! distribution, then score and filter rendered candidates.

mod sample;
mod score;
mod voxel;

pub use sample::sample_candidates;
pub use score::{filter_top, score_candidate, CandidateScore};
pub use voxel::{uniform_point_in, weight_grid, weight_voxels, VoxelGrid, VoxelWeights};

use crate::categories::CategoryWeights;
use crate::pdf::CategoryPdfSet;
use crate::room_seed;
use crate::scene::{Camera, Room, Scene, SceneIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenConfig {
    /// Approximate voxel count per room, clamped into [1000, 10000] at use.
    pub target_voxels: usize,
    pub rays_per_voxel: usize,
    pub candidates_per_room: usize,
    pub keep_per_room: usize,
    /// Skip the weighting pass and sample eyes uniformly over the room.
    pub uniform_voxel_weights: bool,
    /// Divide each category's likelihood sum by its pixel count. Off in
    /// single-image mode, where raw sums filter more stably.
    pub divide_by_observation_frequency: bool,
    pub seed: u64,
    /// Horizontal field of view in radians, fixed per run.
    pub hfov: f64,
    pub aspect: f64,
    /// Resolution candidates are rendered at for scoring.
    pub score_width: u32,
    pub score_height: u32,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            target_voxels: 4000,
            rays_per_voxel: 200,
            candidates_per_room: 1500,
            keep_per_room: 20,
            uniform_voxel_weights: false,
            divide_by_observation_frequency: true,
            seed: 0,
            hfov: 57f64.to_radians(),
            aspect: 4.0 / 3.0,
            score_width: 80,
            score_height: 60,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<(), CandGenError> {
        if self.rays_per_voxel < 1
            || self.candidates_per_room < 1
            || self.keep_per_room < 1
            || self.target_voxels < 1
        {
            return Err(CandGenError::BadConfig("counts must be at least 1".into()));
        }
        if self.keep_per_room > self.candidates_per_room {
            return Err(CandGenError::BadConfig(
                "keep_per_room exceeds candidates_per_room".into(),
            ));
        }
        Ok(())
    }

    /// Adjustments for tiny example sets: more samples to compensate for the
    /// narrower matched distribution, raw likelihood sums, and (paired with
    /// `PdfConfig::single_image_mode`) Gaussian-smoothed depth.
    pub fn single_image_preset(self) -> Self {
        GenConfig {
            candidates_per_room: 3500,
            divide_by_observation_frequency: false,
            ..self
        }
    }
}

/// Distribution over camera orientations: yaw uniform, pitch from a prior,
/// roll fixed (handheld/mounted cameras sit near zero roll).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TiltPrior {
    pub pitch_mean: f64,
    pub pitch_std: f64,
    /// Optional tabulated pitch pdf over uniform bins spanning
    /// [pitch_min, pitch_max]; overrides the Gaussian when present.
    pub pitch_table: Option<PitchTable>,
    pub roll: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PitchTable {
    pub min: f64,
    pub max: f64,
    pub weights: Vec<f64>,
}

impl Default for TiltPrior {
    fn default() -> Self {
        TiltPrior {
            pitch_mean: -10f64.to_radians(),
            pitch_std: 15f64.to_radians(),
            pitch_table: None,
            roll: 0.0,
        }
    }
}

/// Pitch samples stay strictly inside (-pi/2, pi/2) to keep cameras valid.
pub const PITCH_LIMIT: f64 = std::f64::consts::FRAC_PI_2 - 1e-3;

impl TiltPrior {
    pub fn sample_pitch(&self, rng: &mut impl Rng) -> f64 {
        let raw = match &self.pitch_table {
            Some(table) => {
                let total: f64 = table.weights.iter().sum();
                let mut u = rng.gen_range(0.0..total);
                let mut bin = table.weights.len() - 1;
                for (i, &w) in table.weights.iter().enumerate() {
                    if u < w {
                        bin = i;
                        break;
                    }
                    u -= w;
                }
                let step = (table.max - table.min) / table.weights.len() as f64;
                table.min + (bin as f64 + rng.gen_range(0.0..1.0)) * step
            }
            None => self.pitch_mean + self.pitch_std * sample_standard_normal(rng),
        };
        raw.clamp(-PITCH_LIMIT, PITCH_LIMIT)
    }

    pub fn sample_yaw(&self, rng: &mut impl Rng) -> f64 {
        rng.gen_range(0.0..std::f64::consts::TAU)
    }

    /// Unit direction with uniform yaw and prior pitch, for voxel-stage rays.
    pub fn sample_direction(&self, rng: &mut impl Rng) -> crate::geom::Vec3 {
        let yaw = self.sample_yaw(rng);
        let pitch = self.sample_pitch(rng);
        let (sy, cy) = yaw.sin_cos();
        let (sp, cp) = pitch.sin_cos();
        crate::geom::Vec3::new(cp * cy, cp * sy, sp)
    }
}

fn sample_standard_normal(rng: &mut impl Rng) -> f64 {
    use rand_distr::{Distribution, StandardNormal};
    StandardNormal.sample(rng)
}

/// A rendered-and-scored camera proposal.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    /// Globally unique: room index * candidates_per_room + within-room index.
    pub id: u64,
    pub room: String,
    pub camera: Camera,
    /// Per-category weighted mean (or sum) likelihood, length = table size.
    pub vector: Vec<f64>,
    /// Sum of the score vector.
    pub aggregate: f64,
    /// Unweighted, undivided whole-image likelihood sum.
    pub whole_image: f64,
}

#[derive(Debug, Error)]
pub enum CandGenError {
    #[error("invalid generation config: {0}")]
    BadConfig(String),
    #[error("room {0:?}: voxel weights are all zero; no candidates can be sampled")]
    ZeroVoxelWeights(String),
    #[error("room {0:?}: exhausted retries placing a camera outside geometry")]
    RetryBudgetExhausted(String),
    #[error("room {0:?} is not part of the scene")]
    UnknownRoom(String),
}

/// Runs the full per-room generation pass: weight voxels, sample cameras,
/// render each at scoring resolution, score against the pdfs, and keep the
/// top slice by aggregate score. Deterministic for a fixed (seed, room id):
/// the room's RNG stream is derived from both, so rooms may be processed in
/// any order or in parallel.
pub fn generate_room(
    scene: &Scene,
    room: &Room,
    pdfs: &CategoryPdfSet,
    weights: &CategoryWeights,
    tilt: &TiltPrior,
    cfg: &GenConfig,
) -> Result<Vec<Candidate>, CandGenError> {
    cfg.validate()?;
    let room_index = scene
        .rooms
        .iter()
        .position(|r| r.id == room.id)
        .ok_or_else(|| CandGenError::UnknownRoom(room.id.clone()))?;
    let index = SceneIndex::new(scene);
    let mut rng = ChaCha8Rng::seed_from_u64(room_seed(cfg.seed, &room.id));
    let vw = weight_voxels(room, &index, pdfs, weights, tilt, cfg, &mut rng);
    if !cfg.uniform_voxel_weights && vw.total_weight() <= 0.0 {
        return Err(CandGenError::ZeroVoxelWeights(room.id.clone()));
    }
    let cameras = sample_candidates(room, &vw, tilt, cfg, &mut rng)?;
    let id_base = (room_index * cfg.candidates_per_room) as u64;
    let candidates = cameras
        .into_iter()
        .enumerate()
        .map(|(i, camera)| {
            let img = index.render(&camera, cfg.score_width, cfg.score_height);
            let score = score_candidate(&img, pdfs, weights, cfg);
            Candidate {
                id: id_base + i as u64,
                room: room.id.clone(),
                camera,
                aggregate: score.vector.iter().sum(),
                vector: score.vector,
                whole_image: score.whole_image,
            }
        })
        .collect();
    Ok(filter_top(candidates, cfg.keep_per_room))
}
