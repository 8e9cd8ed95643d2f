//! Core library for data-driven camera view selection over labeled box
//! scenes: scene modeling and rendering, category likelihood histograms,
//! candidate generation, submodular view-set selection, reference baseline
//! samplers, and histogram-distance evaluation.

pub mod baselines;
pub mod candgen;
pub mod categories;
pub mod emd;
pub mod geom;
pub mod io;
pub mod pdf;
pub mod scene;
pub mod select;
pub mod suite;

/// 64-bit FNV-1a. Used to derive per-room RNG streams from string ids; a
/// hand-rolled hash keeps seeds stable across toolchain versions.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// RNG seed for one room's generation work: decorrelates rooms under a
/// shared run seed, and makes each room's stream independent of scheduling.
pub fn room_seed(run_seed: u64, room_id: &str) -> u64 {
    run_seed ^ fnv1a64(room_id.as_bytes())
}
