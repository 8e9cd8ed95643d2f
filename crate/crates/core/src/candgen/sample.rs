//! Camera sampling from weighted voxels.

use super::voxel::{uniform_point_in, VoxelWeights};
use super::{CandGenError, GenConfig, TiltPrior};
use crate::scene::{Camera, Room};
use rand::Rng;

const PLACEMENT_RETRIES: usize = 100;

/// Draws `candidates_per_room` cameras: voxel proportional to its weight
/// (uniform over voxels in uniform-weight mode), eye uniform inside the
/// voxel, yaw uniform, pitch and roll from the tilt prior. An eye landing
/// inside any object box is rejected and redrawn from scratch.
pub fn sample_candidates(
    room: &Room,
    vw: &VoxelWeights,
    tilt: &TiltPrior,
    cfg: &GenConfig,
    rng: &mut impl Rng,
) -> Result<Vec<Camera>, CandGenError> {
    // Cumulative weights once; binary search per draw.
    let mut cumulative = Vec::with_capacity(vw.weight.len());
    let mut total = 0.0;
    for &w in &vw.weight {
        total += w;
        cumulative.push(total);
    }
    if !(total > 0.0) {
        return Err(CandGenError::ZeroVoxelWeights(room.id.clone()));
    }

    let mut cameras = Vec::with_capacity(cfg.candidates_per_room);
    for _ in 0..cfg.candidates_per_room {
        let mut placed = None;
        for _ in 0..PLACEMENT_RETRIES {
            let u = rng.gen_range(0.0..total);
            let v = cumulative.partition_point(|&c| c <= u);
            let eye = uniform_point_in(&vw.grid.voxel_bounds(v), rng);
            let yaw = tilt.sample_yaw(rng);
            let pitch = tilt.sample_pitch(rng);
            if room
                .objects
                .iter()
                .any(|o| o.boxes.iter().any(|b| b.contains(eye)))
            {
                continue;
            }
            placed = Some(Camera::new(eye, yaw, pitch, tilt.roll, cfg.hfov, cfg.aspect));
            break;
        }
        match placed {
            Some(cam) => cameras.push(cam),
            None => return Err(CandGenError::RetryBudgetExhausted(room.id.clone())),
        }
    }
    Ok(cameras)
}
