//! Comparison view samplers: rand, hum, cat, traj, heur.
//!
//! Each sampler places cameras by a fixed recipe instead of the learned
//! scoring pipeline. They share one config and return room-tagged cameras
//! plus human-readable warnings for rooms or slots that had to be skipped.

use crate::candgen::{uniform_point_in, PITCH_LIMIT};
use crate::categories::CategoryTable;
use crate::geom::Vec3;
use crate::scene::{Camera, FreeGrid, Room, Scene, SceneIndex, pack_instance, NO_OBJECT};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, UnitSphere};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::f64::consts::TAU;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BaselineError {
    #[error("invalid baseline config: {0}")]
    BadConfig(String),
    #[error("scene has no selectable-category objects")]
    NoSelectableObjects,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct BaselineConfig {
    pub views_total: usize,
    pub eye_height: f64,
    pub grid_cell: f64,
    pub clearance: f64,
    /// Objects smaller than this pixel count on screen contribute nothing
    /// to the heur score.
    pub heur_min_pixels: f64,
    pub heur_tilt: f64,
    pub heur_directions: usize,
    pub cat_ring_radii: Vec<f64>,
    pub cat_ring_angles: usize,
    pub score_width: u32,
    pub score_height: u32,
    pub hfov: f64,
    pub aspect: f64,
}

impl Default for BaselineConfig {
    fn default() -> Self {
        BaselineConfig {
            views_total: 40,
            eye_height: 1.55,
            grid_cell: 0.5,
            clearance: 0.25,
            heur_min_pixels: 100.0,
            heur_tilt: (-10.0f64).to_radians(),
            heur_directions: 8,
            cat_ring_radii: vec![0.75, 1.25, 2.0],
            cat_ring_angles: 16,
            score_width: 80,
            score_height: 60,
            hfov: 57.0f64.to_radians(),
            aspect: 4.0 / 3.0,
        }
    }
}

impl BaselineConfig {
    pub fn validate(&self) -> Result<(), BaselineError> {
        let mut problems = Vec::new();
        if self.views_total == 0 {
            problems.push("views_total must be at least 1");
        }
        if self.eye_height <= 0.0 {
            problems.push("eye_height must be positive");
        }
        if self.grid_cell <= 0.0 {
            problems.push("grid_cell must be positive");
        }
        if self.clearance < 0.0 {
            problems.push("clearance must be nonnegative");
        }
        if self.heur_min_pixels <= 0.0 {
            problems.push("heur_min_pixels must be positive");
        }
        if self.heur_directions == 0 {
            problems.push("heur_directions must be at least 1");
        }
        if self.cat_ring_radii.is_empty() || self.cat_ring_radii.iter().any(|&r| r <= 0.0) {
            problems.push("cat_ring_radii must be positive");
        }
        if self.cat_ring_angles == 0 {
            problems.push("cat_ring_angles must be at least 1");
        }
        if self.score_width == 0 || self.score_height == 0 {
            problems.push("scoring resolution must be nonzero");
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(BaselineError::BadConfig(problems.join("; ")))
        }
    }
}

#[derive(Debug, Clone)]
pub struct PlacedView {
    pub room: String,
    pub camera: Camera,
}

#[derive(Debug, Clone, Default)]
pub struct BaselineRun {
    pub views: Vec<PlacedView>,
    pub warnings: Vec<String>,
}

const PLACEMENT_RETRIES: usize = 100;

fn inside_any_object(room: &Room, p: Vec3) -> bool {
    room.objects
        .iter()
        .any(|o| o.boxes.iter().any(|b| b.contains(p)))
}

fn sphere_direction(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let v: [f64; 3] = UnitSphere.sample(rng);
    let yaw = v[1].atan2(v[0]);
    let pitch = v[2].clamp(-1.0, 1.0).asin().clamp(-PITCH_LIMIT, PITCH_LIMIT);
    (yaw, pitch)
}

/// Yaw/pitch of the ray from `from` towards `to`; degenerate when the two
/// points coincide, in which case the camera looks along +x.
fn aim_at(from: Vec3, to: Vec3) -> (f64, f64) {
    let d = to - from;
    let horizontal = d.x.hypot(d.y);
    if horizontal == 0.0 && d.z == 0.0 {
        return (0.0, 0.0);
    }
    let yaw = if horizontal == 0.0 { 0.0 } else { d.y.atan2(d.x) };
    let pitch = d.z.atan2(horizontal).clamp(-PITCH_LIMIT, PITCH_LIMIT);
    (yaw, pitch)
}

/// Uniform positions in the room volume (outside object boxes), uniform
/// sphere directions, one view per room cycling until the budget is met.
pub fn rand_views(
    scene: &Scene,
    cfg: &BaselineConfig,
    rng: &mut ChaCha8Rng,
) -> Result<BaselineRun, BaselineError> {
    sample_positional(scene, cfg, rng, |room, rng| {
        for _ in 0..PLACEMENT_RETRIES {
            let p = uniform_point_in(&room.bounds, rng);
            if !inside_any_object(room, p) {
                return Some(p);
            }
        }
        None
    })
}

/// rand with the camera pinned to eye height above the floor. Rooms
/// shorter than the eye height are skipped.
pub fn hum_views(
    scene: &Scene,
    cfg: &BaselineConfig,
    rng: &mut ChaCha8Rng,
) -> Result<BaselineRun, BaselineError> {
    let eye = cfg.eye_height;
    sample_positional(scene, cfg, rng, move |room, rng| {
        let z = room.floor_z() + eye;
        if z >= room.bounds.max.z {
            return None;
        }
        for _ in 0..PLACEMENT_RETRIES {
            let x = rng.gen_range(room.bounds.min.x..room.bounds.max.x);
            let y = rng.gen_range(room.bounds.min.y..room.bounds.max.y);
            let p = Vec3::new(x, y, z);
            if !inside_any_object(room, p) {
                return Some(p);
            }
        }
        None
    })
}

fn sample_positional(
    scene: &Scene,
    cfg: &BaselineConfig,
    rng: &mut ChaCha8Rng,
    mut place: impl FnMut(&Room, &mut ChaCha8Rng) -> Option<Vec3>,
) -> Result<BaselineRun, BaselineError> {
    cfg.validate()?;
    let mut run = BaselineRun::default();
    let n = scene.rooms.len();
    let mut dead = vec![false; n];
    let mut slot = 0usize;
    while run.views.len() < cfg.views_total && dead.iter().any(|d| !d) {
        let ri = slot % n;
        slot += 1;
        if dead[ri] {
            continue;
        }
        let room = &scene.rooms[ri];
        match place(room, rng) {
            Some(p) => {
                let (yaw, pitch) = sphere_direction(rng);
                run.views.push(PlacedView {
                    room: room.id.clone(),
                    camera: Camera::new(p, yaw, pitch, 0.0, cfg.hfov, cfg.aspect),
                });
            }
            None => {
                dead[ri] = true;
                run.warnings
                    .push(format!("room {}: no feasible position, skipped", room.id));
            }
        }
    }
    Ok(run)
}

/// Splits the view budget equally across non-structural categories present
/// in the scene. Each view draws an object of its category (with
/// replacement), walks a ring of eye-height positions around the object
/// centroid, and keeps the position showing the most pixels of that object.
pub fn cat_views(
    scene: &Scene,
    cfg: &BaselineConfig,
    rng: &mut ChaCha8Rng,
) -> Result<BaselineRun, BaselineError> {
    cfg.validate()?;
    let mut pools: Vec<Vec<(usize, usize)>> = vec![Vec::new(); scene.categories.names().len()];
    let mut present = BTreeSet::new();
    for (ri, room) in scene.rooms.iter().enumerate() {
        for (oi, obj) in room.objects.iter().enumerate() {
            if !scene.categories.is_structural(obj.category) && !obj.boxes.is_empty() {
                pools[obj.category as usize].push((ri, oi));
                present.insert(obj.category);
            }
        }
    }
    if present.is_empty() {
        return Err(BaselineError::NoSelectableObjects);
    }
    let cats: Vec<u8> = present.into_iter().collect();
    let base = cfg.views_total / cats.len();
    let extra = cfg.views_total % cats.len();
    let index = SceneIndex::new(scene);
    let mut run = BaselineRun::default();
    for (ci, &cat) in cats.iter().enumerate() {
        let budget = base + usize::from(ci < extra);
        for _ in 0..budget {
            let mut placed = false;
            for _ in 0..PLACEMENT_RETRIES {
                let pool = &pools[cat as usize];
                let (ri, oi) = pool[rng.gen_range(0..pool.len())];
                let room = &scene.rooms[ri];
                let target = room.objects[oi].centroid();
                if let Some(camera) = best_ring_view(&index, room, ri, oi, target, cfg) {
                    run.views.push(PlacedView { room: room.id.clone(), camera });
                    placed = true;
                    break;
                }
            }
            if !placed {
                run.warnings.push(format!(
                    "category {}: no feasible ring view, slot dropped",
                    scene.categories.name(cat)
                ));
            }
        }
    }
    Ok(run)
}

/// Evaluates every feasible ring position and returns the camera whose
/// render shows the largest pixel fraction of object (room_idx, obj_idx).
/// First strict improvement wins, so ties resolve to the smaller radius
/// index and then the smaller angle index.
fn best_ring_view(
    index: &SceneIndex,
    room: &Room,
    room_idx: usize,
    obj_idx: usize,
    target: Vec3,
    cfg: &BaselineConfig,
) -> Option<Camera> {
    let wanted = pack_instance(room_idx, obj_idx);
    let z = room.floor_z() + cfg.eye_height;
    if z >= room.bounds.max.z {
        return None;
    }
    let total_px = (cfg.score_width as usize * cfg.score_height as usize) as f64;
    let mut best: Option<(f64, Camera)> = None;
    for &radius in &cfg.cat_ring_radii {
        for ai in 0..cfg.cat_ring_angles {
            let angle = TAU * ai as f64 / cfg.cat_ring_angles as f64;
            let p = Vec3::new(
                target.x + radius * angle.cos(),
                target.y + radius * angle.sin(),
                z,
            );
            if !room.bounds.contains(p) || inside_any_object(room, p) {
                continue;
            }
            let (yaw, pitch) = aim_at(p, target);
            let camera = Camera::new(p, yaw, pitch, 0.0, cfg.hfov, cfg.aspect);
            let (_, instances) =
                index.render_instances(&camera, cfg.score_width, cfg.score_height);
            let hits = instances.iter().filter(|&&v| v == wanted).count();
            let fraction = hits as f64 / total_px;
            if best.as_ref().map_or(true, |(b, _)| fraction > *b) {
                best = Some((fraction, camera));
            }
        }
    }
    best.map(|(_, c)| c)
}

/// Walks the geodesic diameter of each room's free grid and emits one
/// eye-height camera per path cell, aimed at the surface-area-weighted
/// centroid of non-structural objects. The pooled cameras are then
/// subsampled uniformly down to the view budget.
pub fn traj_views(
    scene: &Scene,
    cfg: &BaselineConfig,
    rng: &mut ChaCha8Rng,
) -> Result<BaselineRun, BaselineError> {
    cfg.validate()?;
    let mut run = BaselineRun::default();
    let mut pool = Vec::new();
    for room in &scene.rooms {
        let grid = match FreeGrid::build(room, &scene.categories, cfg.grid_cell, cfg.clearance) {
            Ok(g) => g,
            Err(e) => {
                run.warnings.push(format!("room {}: {e}, skipped", room.id));
                continue;
            }
        };
        if grid.free_count() < 2 {
            run.warnings
                .push(format!("room {}: fewer than 2 free cells, skipped", room.id));
            continue;
        }
        let seed = nearest_free_cell(&grid, room.bounds.center());
        let a = farthest_cell(&grid, seed);
        let b = farthest_cell(&grid, a);
        if a == b {
            run.warnings
                .push(format!("room {}: free space degenerate, skipped", room.id));
            continue;
        }
        let path = grid
            .shortest_path(a, b)
            .expect("endpoints proved mutually reachable by BFS");
        let target = object_mass_center(room, &scene.categories)
            .unwrap_or_else(|| room.bounds.center());
        let z = room.floor_z() + cfg.eye_height;
        for (i, j) in path {
            let (x, y) = grid.center(i, j);
            let p = Vec3::new(x, y, z);
            let (yaw, pitch) = aim_at(p, target);
            pool.push(PlacedView {
                room: room.id.clone(),
                camera: Camera::new(p, yaw, pitch, 0.0, cfg.hfov, cfg.aspect),
            });
        }
    }
    if pool.len() > cfg.views_total {
        let mut keep = rand::seq::index::sample(rng, pool.len(), cfg.views_total).into_vec();
        keep.sort_unstable();
        run.views = keep.into_iter().map(|i| pool[i].clone()).collect();
    } else {
        run.views = pool;
    }
    Ok(run)
}

fn nearest_free_cell(grid: &FreeGrid, center: Vec3) -> (usize, usize) {
    grid.free_cells()
        .min_by(|&a, &b| {
            let da = cell_dist2(grid, a, center);
            let db = cell_dist2(grid, b, center);
            da.total_cmp(&db)
        })
        .expect("caller checked free_count >= 2")
}

fn cell_dist2(grid: &FreeGrid, cell: (usize, usize), center: Vec3) -> f64 {
    let (x, y) = grid.center(cell.0, cell.1);
    (x - center.x).powi(2) + (y - center.y).powi(2)
}

/// Farthest reachable free cell by 4-connected BFS; distance ties keep the
/// row-major earlier cell because free_cells scans in that order.
fn farthest_cell(grid: &FreeGrid, from: (usize, usize)) -> (usize, usize) {
    let dist = grid.bfs_distances(from);
    let mut best = from;
    let mut best_d = 0u32;
    for (i, j) in grid.free_cells() {
        if let Some(d) = dist[grid.cell_index(i, j)] {
            if d > best_d {
                best_d = d;
                best = (i, j);
            }
        }
    }
    best
}

fn object_mass_center(room: &Room, categories: &CategoryTable) -> Option<Vec3> {
    let mut total = 0.0;
    let mut acc = Vec3::ZERO;
    for obj in &room.objects {
        if categories.is_structural(obj.category) || obj.boxes.is_empty() {
            continue;
        }
        let w = obj.surface_area();
        acc = acc + obj.centroid() * w;
        total += w;
    }
    (total > 0.0).then(|| acc / total)
}

/// Exhaustively scores every free-grid cell and yaw direction at a fixed
/// downward tilt, keeping the global top of
/// s = Σ_i [p_i > m] (ln p_i − ln m) over per-object pixel counts p_i.
pub fn heur_views(scene: &Scene, cfg: &BaselineConfig) -> Result<BaselineRun, BaselineError> {
    cfg.validate()?;
    let index = SceneIndex::new(scene);
    let mut run = BaselineRun::default();
    // (score, room id, free-cell index, direction index) drives the final
    // ordering; the tuple layout makes the declared tie order literal.
    let mut scored: Vec<(f64, String, usize, usize, PlacedView)> = Vec::new();
    for room in &scene.rooms {
        let grid = match FreeGrid::build(room, &scene.categories, cfg.grid_cell, cfg.clearance) {
            Ok(g) => g,
            Err(e) => {
                run.warnings.push(format!("room {}: {e}, skipped", room.id));
                continue;
            }
        };
        let z = room.floor_z() + cfg.eye_height;
        for (cell_idx, (i, j)) in grid.free_cells().enumerate() {
            let (x, y) = grid.center(i, j);
            let p = Vec3::new(x, y, z);
            for d in 0..cfg.heur_directions {
                let yaw = TAU * d as f64 / cfg.heur_directions as f64;
                let camera = Camera::new(p, yaw, cfg.heur_tilt, 0.0, cfg.hfov, cfg.aspect);
                let (_, instances) =
                    index.render_instances(&camera, cfg.score_width, cfg.score_height);
                let score = heur_score(&instances, cfg.heur_min_pixels);
                scored.push((
                    score,
                    room.id.clone(),
                    cell_idx,
                    d,
                    PlacedView { room: room.id.clone(), camera },
                ));
            }
        }
    }
    scored.sort_by(|a, b| {
        b.0.total_cmp(&a.0)
            .then_with(|| a.1.cmp(&b.1))
            .then_with(|| a.2.cmp(&b.2))
            .then_with(|| a.3.cmp(&b.3))
    });
    run.views = scored
        .into_iter()
        .take(cfg.views_total)
        .map(|(.., v)| v)
        .collect();
    Ok(run)
}

/// Sum of ln(p_i / m) over object instances whose pixel count exceeds m.
/// The map keeps instance-id order so the float sum is reproducible no
/// matter how pixels were laid out.
pub fn heur_score(instances: &[u32], min_pixels: f64) -> f64 {
    let mut counts = std::collections::BTreeMap::new();
    for &inst in instances {
        if inst != NO_OBJECT {
            *counts.entry(inst).or_insert(0u64) += 1;
        }
    }
    counts
        .values()
        .filter(|&&p| (p as f64) > min_pixels)
        .map(|&p| (p as f64 / min_pixels).ln())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Aabb;
    use crate::scene::SceneObject;
    use rand::SeedableRng;

    fn boxed_room(id: &str, objects: Vec<SceneObject>) -> Room {
        Room {
            id: id.to_string(),
            bounds: Aabb::from_corners(Vec3::new(0.0, 0.0, 0.0), Vec3::new(6.0, 5.0, 2.5)),
            objects,
        }
    }

    fn slab(min: [f64; 3], max: [f64; 3], category: u8) -> SceneObject {
        SceneObject {
            category,
            boxes: vec![Aabb::from_corners(
                Vec3::new(min[0], min[1], min[2]),
                Vec3::new(max[0], max[1], max[2]),
            )],
        }
    }

    // wall 0, floor 1, bed 2, chair 3 so structural filtering is exercised.
    fn table() -> CategoryTable {
        CategoryTable::new(vec![
            "wall".into(),
            "floor".into(),
            "bed".into(),
            "chair".into(),
        ])
    }

    fn scene_with(objects: Vec<SceneObject>) -> Scene {
        Scene {
            categories: table(),
            rooms: vec![boxed_room("r0", objects)],
        }
    }

    fn furnished() -> Vec<SceneObject> {
        vec![
            slab([0.0, 0.0, 0.0], [6.0, 5.0, 0.05], 1),
            slab([0.0, 0.0, 0.0], [0.05, 5.0, 2.5], 0),
            slab([2.0, 2.0, 0.0], [3.5, 3.0, 0.6], 2),
            slab([4.5, 1.0, 0.0], [5.0, 1.5, 0.9], 3),
        ]
    }

    #[test]
    fn rand_positions_avoid_object_boxes() {
        let scene = scene_with(furnished());
        let mut cfg = BaselineConfig::default();
        cfg.views_total = 500;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let run = rand_views(&scene, &cfg, &mut rng).unwrap();
        assert_eq!(run.views.len(), 500);
        for v in &run.views {
            let p = v.camera.position;
            assert!(scene.rooms[0].bounds.contains(p));
            assert!(!inside_any_object(&scene.rooms[0], p), "camera at {p:?}");
        }
    }

    #[test]
    fn rand_skips_fully_packed_room() {
        let mut scene = scene_with(vec![slab([0.0, 0.0, 0.0], [6.0, 5.0, 2.5], 2)]);
        scene.rooms.push(boxed_room("open", vec![]));
        let mut cfg = BaselineConfig::default();
        cfg.views_total = 10;
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let run = rand_views(&scene, &cfg, &mut rng).unwrap();
        assert_eq!(run.views.len(), 10);
        assert!(run.views.iter().all(|v| v.room == "open"));
        assert_eq!(run.warnings.len(), 1);
    }

    #[test]
    fn hum_heights_are_exact() {
        let scene = scene_with(furnished());
        let mut cfg = BaselineConfig::default();
        cfg.views_total = 200;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let run = hum_views(&scene, &cfg, &mut rng).unwrap();
        assert_eq!(run.views.len(), 200);
        let floor = scene.rooms[0].floor_z();
        for v in &run.views {
            assert_eq!(v.camera.position.z, floor + 1.55);
        }
    }

    #[test]
    fn hum_skips_low_ceiling_room() {
        let mut scene = scene_with(vec![]);
        scene.rooms[0].bounds = Aabb::from_corners(Vec3::ZERO, Vec3::new(4.0, 4.0, 1.2));
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let run = hum_views(&scene, &BaselineConfig::default(), &mut rng).unwrap();
        assert!(run.views.is_empty());
        assert_eq!(run.warnings.len(), 1);
    }

    #[test]
    fn hum_yaw_is_circularly_uniform() {
        let scene = scene_with(vec![]);
        let mut cfg = BaselineConfig::default();
        cfg.views_total = 10_000;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let run = hum_views(&scene, &cfg, &mut rng).unwrap();
        let (s, c) = run
            .views
            .iter()
            .fold((0.0, 0.0), |(s, c), v| (s + v.camera.yaw.sin(), c + v.camera.yaw.cos()));
        let resultant = (s * s + c * c).sqrt() / run.views.len() as f64;
        assert!(resultant < 0.05, "mean resultant length {resultant}");
    }

    #[test]
    fn cat_budget_splits_equally() {
        let scene = scene_with(furnished());
        let mut cfg = BaselineConfig::default();
        cfg.views_total = 10;
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let run = cat_views(&scene, &cfg, &mut rng).unwrap();
        // Two selectable categories (bed, chair); walls and floor get none.
        assert_eq!(run.views.len() + run.warnings.len(), 10);
        assert!(run.warnings.is_empty(), "{:?}", run.warnings);
    }

    #[test]
    fn cat_winner_beats_every_other_ring_candidate() {
        let scene = scene_with(vec![slab([2.5, 2.0, 0.0], [3.5, 3.0, 0.6], 2)]);
        let mut cfg = BaselineConfig::default();
        cfg.views_total = 1;
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let run = cat_views(&scene, &cfg, &mut rng).unwrap();
        assert_eq!(run.views.len(), 1);
        let index = SceneIndex::new(&scene);
        let won = &run.views[0].camera;
        let wanted = pack_instance(0, 0);
        let frac = |cam: &Camera| {
            let (_, inst) = index.render_instances(cam, cfg.score_width, cfg.score_height);
            inst.iter().filter(|&&v| v == wanted).count()
        };
        let winner_frac = frac(won);
        let target = scene.rooms[0].objects[0].centroid();
        let z = scene.rooms[0].floor_z() + cfg.eye_height;
        for &r in &cfg.cat_ring_radii {
            for ai in 0..cfg.cat_ring_angles {
                let angle = TAU * ai as f64 / cfg.cat_ring_angles as f64;
                let p = Vec3::new(target.x + r * angle.cos(), target.y + r * angle.sin(), z);
                if !scene.rooms[0].bounds.contains(p)
                    || inside_any_object(&scene.rooms[0], p)
                {
                    continue;
                }
                let (yaw, pitch) = aim_at(p, target);
                let cam = Camera::new(p, yaw, pitch, 0.0, cfg.hfov, cfg.aspect);
                assert!(winner_frac >= frac(&cam));
            }
        }
    }

    #[test]
    fn cat_requires_selectable_objects() {
        // Only structural objects present.
        let scene = scene_with(vec![slab([0.0, 0.0, 0.0], [6.0, 5.0, 0.05], 1)]);
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        assert!(matches!(
            cat_views(&scene, &BaselineConfig::default(), &mut rng),
            Err(BaselineError::NoSelectableObjects)
        ));
    }

    #[test]
    fn cat_discards_ring_positions_inside_walls() {
        // Bed flush against the x=0 wall: the wall slab spans x < 0.35, so
        // ring points behind the bed are infeasible and must be skipped.
        let scene = scene_with(vec![
            slab([0.0, 0.0, 0.0], [0.35, 5.0, 2.5], 0),
            slab([0.35, 2.0, 0.0], [1.35, 3.0, 0.6], 2),
        ]);
        let mut cfg = BaselineConfig::default();
        cfg.views_total = 3;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let run = cat_views(&scene, &cfg, &mut rng).unwrap();
        for v in &run.views {
            assert!(!inside_any_object(&scene.rooms[0], v.camera.position));
        }
    }

    #[test]
    fn traj_spans_geodesic_diameter_in_empty_room() {
        let scene = scene_with(vec![]);
        let mut cfg = BaselineConfig::default();
        cfg.views_total = 1000;
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let run = traj_views(&scene, &cfg, &mut rng).unwrap();
        // 6x5 m room at 0.5 m cells: 12x10 grid, path spans opposite
        // corners, manhattan length 11 + 9 + 1 cells.
        assert_eq!(run.views.len(), 21);
        let first = run.views.first().unwrap().camera.position;
        let last = run.views.last().unwrap().camera.position;
        assert!((first.x - last.x).abs() > 5.0 && (first.y - last.y).abs() > 4.0);
    }

    #[test]
    fn traj_aims_at_single_object_centroid() {
        let scene = scene_with(vec![slab([2.5, 2.0, 0.0], [3.5, 3.0, 1.0], 2)]);
        let mut cfg = BaselineConfig::default();
        cfg.views_total = 500;
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let run = traj_views(&scene, &cfg, &mut rng).unwrap();
        let target = scene.rooms[0].objects[0].centroid();
        for v in &run.views {
            let (yaw, _) = aim_at(v.camera.position, target);
            assert!((yaw - v.camera.yaw).abs() < 1e-12);
        }
    }

    #[test]
    fn traj_path_cells_stay_free_around_corner() {
        // Wall splitting the room, gap at high y: free space is L-shaped.
        let scene = scene_with(vec![slab([2.8, 0.0, 0.0], [3.2, 3.9, 2.5], 0)]);
        let mut cfg = BaselineConfig::default();
        cfg.views_total = 1000;
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let run = traj_views(&scene, &cfg, &mut rng).unwrap();
        assert!(!run.views.is_empty());
        let on_both_sides = run.views.iter().any(|v| v.camera.position.x < 2.8)
            && run.views.iter().any(|v| v.camera.position.x > 3.2);
        assert!(on_both_sides, "path should cross the gap");
        for v in &run.views {
            assert!(!inside_any_object(&scene.rooms[0], v.camera.position));
        }
    }

    #[test]
    fn traj_subsamples_to_budget() {
        let scene = scene_with(vec![]);
        let mut cfg = BaselineConfig::default();
        cfg.views_total = 5;
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let run = traj_views(&scene, &cfg, &mut rng).unwrap();
        assert_eq!(run.views.len(), 5);
    }

    #[test]
    fn heur_score_examples() {
        let m = 100.0;
        // Everything at or below m scores zero.
        let below: Vec<u32> = std::iter::repeat(7u32).take(100).collect();
        assert_eq!(heur_score(&below, m), 0.0);
        // One object at e*m pixels scores exactly 1.
        let n = (std::f64::consts::E * m).round() as usize;
        let one: Vec<u32> = std::iter::repeat(7u32).take(n).collect();
        assert!((heur_score(&one, m) - (n as f64 / m).ln()).abs() < 1e-12);
        assert!((heur_score(&one, m) - 1.0).abs() < 2e-3);
        // {4m} vs {2m, 2m}: ln 4 = 2 ln 2, an exact tie.
        let mut four_m = vec![1u32; 400];
        let mut two_two = vec![2u32; 200];
        two_two.extend(vec![3u32; 200]);
        four_m.truncate(400);
        assert!((heur_score(&four_m, m) - heur_score(&two_two, m)).abs() < 1e-12);
        // Background pixels never contribute.
        let mut with_bg = vec![NO_OBJECT; 1000];
        with_bg.extend(vec![5u32; 400]);
        assert!((heur_score(&with_bg, m) - 4.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn heur_score_is_order_invariant() {
        let m = 50.0;
        let mut a: Vec<u32> = Vec::new();
        a.extend(vec![1u32; 80]);
        a.extend(vec![2u32; 120]);
        a.extend(vec![3u32; 60]);
        let mut b = a.clone();
        b.reverse();
        assert_eq!(heur_score(&a, m).to_bits(), heur_score(&b, m).to_bits());
    }

    #[test]
    fn heur_keeps_global_top_and_is_deterministic() {
        let scene = scene_with(furnished());
        let mut cfg = BaselineConfig::default();
        cfg.views_total = 6;
        cfg.heur_directions = 4;
        cfg.score_width = 40;
        cfg.score_height = 30;
        let run1 = heur_views(&scene, &cfg).unwrap();
        let run2 = heur_views(&scene, &cfg).unwrap();
        assert_eq!(run1.views.len(), 6);
        for (a, b) in run1.views.iter().zip(&run2.views) {
            assert_eq!(a.camera.position, b.camera.position);
            assert_eq!(a.camera.yaw.to_bits(), b.camera.yaw.to_bits());
        }
        // The kept views carry exactly the 6 best scores: rebuild the full
        // scoreboard by hand and compare sorted score lists bit for bit.
        let index = SceneIndex::new(&scene);
        let mut kept: Vec<u64> = run1
            .views
            .iter()
            .map(|v| {
                let (_, inst) =
                    index.render_instances(&v.camera, cfg.score_width, cfg.score_height);
                heur_score(&inst, cfg.heur_min_pixels).to_bits()
            })
            .collect();
        let grid =
            FreeGrid::build(&scene.rooms[0], &scene.categories, cfg.grid_cell, cfg.clearance)
                .unwrap();
        let mut all = Vec::new();
        for (i, j) in grid.free_cells() {
            let (x, y) = grid.center(i, j);
            let p = Vec3::new(x, y, scene.rooms[0].floor_z() + cfg.eye_height);
            for d in 0..cfg.heur_directions {
                let yaw = TAU * d as f64 / cfg.heur_directions as f64;
                let cam = Camera::new(p, yaw, cfg.heur_tilt, 0.0, cfg.hfov, cfg.aspect);
                let (_, inst) = index.render_instances(&cam, cfg.score_width, cfg.score_height);
                all.push(heur_score(&inst, cfg.heur_min_pixels));
            }
        }
        all.sort_by(|a, b| b.total_cmp(a));
        let mut top: Vec<u64> = all[..6].iter().map(|s| s.to_bits()).collect();
        top.sort_unstable();
        kept.sort_unstable();
        assert_eq!(kept, top);
    }

    #[test]
    fn fixed_seed_reproduces_random_baselines() {
        let scene = scene_with(furnished());
        let mut cfg = BaselineConfig::default();
        cfg.views_total = 25;
        for f in [rand_views, hum_views, cat_views, traj_views] {
            let mut r1 = ChaCha8Rng::seed_from_u64(77);
            let mut r2 = ChaCha8Rng::seed_from_u64(77);
            let a = f(&scene, &cfg, &mut r1).unwrap();
            let b = f(&scene, &cfg, &mut r2).unwrap();
            assert_eq!(a.views.len(), b.views.len());
            for (x, y) in a.views.iter().zip(&b.views) {
                assert_eq!(x.camera.position, y.camera.position);
                assert_eq!(x.camera.yaw.to_bits(), y.camera.yaw.to_bits());
                assert_eq!(x.camera.pitch.to_bits(), y.camera.pitch.to_bits());
            }
        }
    }

    #[test]
    fn eye_height_baselines_pin_z() {
        let scene = scene_with(furnished());
        let mut cfg = BaselineConfig::default();
        cfg.views_total = 12;
        let floor = scene.rooms[0].floor_z();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let cat = cat_views(&scene, &cfg, &mut rng).unwrap();
        let traj = traj_views(&scene, &cfg, &mut rng).unwrap();
        let heur = heur_views(&scene, &cfg).unwrap();
        for v in cat.views.iter().chain(&traj.views).chain(&heur.views) {
            assert_eq!(v.camera.position.z, floor + cfg.eye_height);
        }
    }

    #[test]
    fn config_validation_rejects_bad_fields() {
        let mut cfg = BaselineConfig::default();
        cfg.views_total = 0;
        assert!(cfg.validate().is_err());
        let mut cfg = BaselineConfig::default();
        cfg.cat_ring_radii = vec![];
        assert!(cfg.validate().is_err());
        let mut cfg = BaselineConfig::default();
        cfg.heur_min_pixels = 0.0;
        assert!(cfg.validate().is_err());
    }
}
