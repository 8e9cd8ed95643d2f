//! Scene representation: rooms of axis-aligned labeled boxes, pinhole
//! cameras, and the semantic depth images rendered from them.

mod grid;
mod raycast;
mod render;

pub use grid::{FreeGrid, GridTooSmall};
pub use raycast::{Hit, SceneIndex};
pub use render::{pack_instance, render_view, NO_OBJECT};

use crate::categories::CategoryTable;
use crate::geom::{Aabb, Vec3};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Object boxes may poke outside their room's interior bounds by this much
/// (wall, floor, and ceiling slabs sit just beyond the interior volume).
pub const CONTAINMENT_MARGIN: f64 = 0.5;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Scene {
    pub categories: CategoryTable,
    pub rooms: Vec<Room>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Room {
    pub id: String,
    /// Interior volume of the room; wall slabs lie just outside it.
    pub bounds: Aabb,
    pub objects: Vec<SceneObject>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SceneObject {
    pub category: u8,
    pub boxes: Vec<Aabb>,
}

impl SceneObject {
    pub fn centroid(&self) -> Vec3 {
        let mut acc = Vec3::ZERO;
        for b in &self.boxes {
            acc = acc + b.center();
        }
        acc / self.boxes.len() as f64
    }

    pub fn surface_area(&self) -> f64 {
        self.boxes.iter().map(Aabb::surface_area).sum()
    }
}

impl Room {
    pub fn floor_z(&self) -> f64 {
        self.bounds.min.z
    }

    /// Smallest box covering the interior bounds and every object box,
    /// used as a raycast pruning volume.
    pub fn envelope(&self) -> Aabb {
        let mut env = self.bounds;
        for obj in &self.objects {
            for b in &obj.boxes {
                env.min.x = env.min.x.min(b.min.x);
                env.min.y = env.min.y.min(b.min.y);
                env.min.z = env.min.z.min(b.min.z);
                env.max.x = env.max.x.max(b.max.x);
                env.max.y = env.max.y.max(b.max.y);
                env.max.z = env.max.z.max(b.max.z);
            }
        }
        env
    }
}

#[derive(Debug, Error)]
pub enum SceneError {
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
    #[error("invalid scene:\n{}", .0.join("\n"))]
    Invalid(Vec<String>),
}

impl Scene {
    /// All invariant violations, one human-readable line each. Empty means
    /// the scene is well formed.
    pub fn validate(&self) -> Vec<String> {
        let mut problems = Vec::new();
        let n = self.categories.len();
        let mut seen_ids = std::collections::HashSet::new();
        for room in &self.rooms {
            if !seen_ids.insert(room.id.as_str()) {
                problems.push(format!("duplicate room id {:?}", room.id));
            }
            if !room.bounds.is_valid() {
                problems.push(format!("room {:?}: bounds have non-positive extent", room.id));
            }
            let allowance = room.bounds.expanded(CONTAINMENT_MARGIN);
            for (oi, obj) in room.objects.iter().enumerate() {
                if (obj.category as usize) >= n {
                    problems.push(format!(
                        "room {:?} object {oi}: category id {} out of range (table has {n})",
                        room.id, obj.category
                    ));
                }
                if obj.boxes.is_empty() {
                    problems.push(format!("room {:?} object {oi}: no boxes", room.id));
                }
                for (bi, b) in obj.boxes.iter().enumerate() {
                    if !b.is_valid() {
                        problems.push(format!(
                            "room {:?} object {oi} box {bi}: non-positive extent",
                            room.id
                        ));
                    } else if !allowance.contains_box(b) {
                        problems.push(format!(
                            "room {:?} object {oi} box {bi}: outside room bounds (+{CONTAINMENT_MARGIN} m margin)",
                            room.id
                        ));
                    }
                }
            }
        }
        problems
    }

    pub fn load(path: &Path) -> Result<Scene, SceneError> {
        let text = std::fs::read_to_string(path).map_err(|source| SceneError::Read {
            path: path.to_owned(),
            source,
        })?;
        let scene: Scene = serde_json::from_str(&text).map_err(|source| SceneError::Parse {
            path: path.to_owned(),
            source,
        })?;
        let problems = scene.validate();
        if problems.is_empty() {
            Ok(scene)
        } else {
            Err(SceneError::Invalid(problems))
        }
    }

    pub fn save(&self, path: &Path) -> Result<(), SceneError> {
        let text = serde_json::to_string_pretty(self).expect("scene serialization cannot fail");
        std::fs::write(path, text).map_err(|source| SceneError::Write {
            path: path.to_owned(),
            source,
        })
    }

    pub fn room(&self, id: &str) -> Option<&Room> {
        self.rooms.iter().find(|r| r.id == id)
    }
}

/// Pinhole camera: a 6-DoF pose plus the per-run optics (horizontal field of
/// view and aspect ratio). Right-handed world, up = +z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Camera {
    pub position: Vec3,
    pub yaw: f64,
    pub pitch: f64,
    pub roll: f64,
    pub hfov: f64,
    pub aspect: f64,
}

/// Orthonormal view frame. `right` and `up` span the image plane.
#[derive(Debug, Clone, Copy)]
pub struct CameraBasis {
    pub forward: Vec3,
    pub right: Vec3,
    pub up: Vec3,
}

impl Camera {
    pub fn new(position: Vec3, yaw: f64, pitch: f64, roll: f64, hfov: f64, aspect: f64) -> Self {
        assert!(
            pitch > -std::f64::consts::FRAC_PI_2 && pitch < std::f64::consts::FRAC_PI_2,
            "pitch must avoid the poles"
        );
        assert!(hfov > 0.0 && hfov < std::f64::consts::PI);
        assert!(aspect > 0.0);
        Camera { position, yaw, pitch, roll, hfov, aspect }
    }

    /// Forward from yaw (about +z, from +x) and pitch (positive looks up),
    /// then roll spins the image plane about the view axis.
    pub fn basis(&self) -> CameraBasis {
        let (sy, cy) = self.yaw.sin_cos();
        let (sp, cp) = self.pitch.sin_cos();
        let forward = Vec3::new(cp * cy, cp * sy, sp);
        let right0 = forward.cross(Vec3::new(0.0, 0.0, 1.0)).normalized();
        let up0 = right0.cross(forward);
        let (sr, cr) = self.roll.sin_cos();
        // Rodrigues about `forward` for vectors already perpendicular to it.
        let right = right0 * cr + forward.cross(right0) * sr;
        let up = up0 * cr + forward.cross(up0) * sr;
        CameraBasis { forward, right, up }
    }

    /// Unit ray through the center of pixel (px, py); py = 0 is the top row.
    pub fn pixel_ray(&self, basis: &CameraBasis, px: u32, py: u32, width: u32, height: u32) -> Vec3 {
        let half_w = (self.hfov * 0.5).tan();
        let half_h = half_w / self.aspect;
        let u = ((px as f64 + 0.5) / width as f64) * 2.0 - 1.0;
        let v = 1.0 - ((py as f64 + 0.5) / height as f64) * 2.0;
        (basis.forward + basis.right * (u * half_w) + basis.up * (v * half_h)).normalized()
    }
}

/// Rendered view: per-pixel category id (or [`crate::categories::BACKGROUND`])
/// and per-pixel z-depth in meters (+inf where background).
#[derive(Debug, Clone, PartialEq)]
pub struct SemanticDepthImage {
    pub width: u32,
    pub height: u32,
    pub category: Vec<u8>,
    pub depth: Vec<f64>,
}

impl SemanticDepthImage {
    pub fn new(width: u32, height: u32) -> Self {
        let n = (width as usize) * (height as usize);
        SemanticDepthImage {
            width,
            height,
            category: vec![crate::categories::BACKGROUND; n],
            depth: vec![f64::INFINITY; n],
        }
    }

    pub fn idx(&self, px: u32, py: u32) -> usize {
        (py as usize) * (self.width as usize) + px as usize
    }

    pub fn pixel_count(&self) -> usize {
        self.category.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Vec3;

    fn box_obj(category: u8, min: [f64; 3], max: [f64; 3]) -> SceneObject {
        SceneObject {
            category,
            boxes: vec![Aabb::new(min.into(), max.into())],
        }
    }

    fn one_room_scene() -> Scene {
        // 4 x 4 x 2.5 room: floor, four walls, one bed box.
        let t = 0.1;
        Scene {
            categories: CategoryTable::nyu40(),
            rooms: vec![Room {
                id: "r0".into(),
                bounds: Aabb::new(Vec3::new(0.0, 0.0, 0.0), Vec3::new(4.0, 4.0, 2.5)),
                objects: vec![
                    box_obj(1, [0.0, 0.0, -t], [4.0, 4.0, 0.0]),
                    box_obj(0, [-t, 0.0, 0.0], [0.0, 4.0, 2.5]),
                    box_obj(0, [4.0, 0.0, 0.0], [4.0 + t, 4.0, 2.5]),
                    box_obj(0, [0.0, -t, 0.0], [4.0, 0.0, 2.5]),
                    box_obj(0, [0.0, 4.0, 0.0], [4.0, 4.0 + t, 2.5]),
                    box_obj(3, [1.0, 1.0, 0.0], [2.4, 3.0, 0.6]),
                ],
            }],
        }
    }

    #[test]
    fn minimal_scene_round_trips() {
        let scene = one_room_scene();
        assert!(scene.validate().is_empty());
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scene.json");
        scene.save(&path).unwrap();
        let loaded = Scene::load(&path).unwrap();
        assert_eq!(loaded.rooms.len(), 1);
        assert_eq!(loaded.rooms[0].objects.len(), 6);
        assert_eq!(loaded.rooms[0].bounds, scene.rooms[0].bounds);
        assert_eq!(loaded.categories, scene.categories);
        let reserialized = serde_json::to_string(&loaded).unwrap();
        assert_eq!(reserialized, serde_json::to_string(&scene).unwrap());
    }

    #[test]
    fn category_out_of_range_rejected() {
        let mut scene = one_room_scene();
        scene.rooms[0].objects[5].category = 40;
        let problems = scene.validate();
        assert_eq!(problems.len(), 1);
        assert!(problems[0].contains("category id 40"));
    }

    #[test]
    fn box_outside_margin_rejected() {
        let mut scene = one_room_scene();
        scene.rooms[0].objects[5].boxes[0].max.x = 4.6;
        assert!(!scene.validate().is_empty());
        scene.rooms[0].objects[5].boxes[0].max.x = 4.5;
        assert!(scene.validate().is_empty());
    }

    #[test]
    fn duplicate_room_ids_rejected() {
        let mut scene = one_room_scene();
        let dup = scene.rooms[0].clone();
        scene.rooms.push(dup);
        assert!(scene.validate().iter().any(|p| p.contains("duplicate room id")));
    }

    #[test]
    fn schema_shape_matches_documented_layout() {
        let scene = one_room_scene();
        let v: serde_json::Value = serde_json::to_value(&scene).unwrap();
        assert!(v["categories"][0].is_string());
        assert_eq!(v["rooms"][0]["id"], "r0");
        assert_eq!(v["rooms"][0]["bounds"]["min"][0], 0.0);
        assert_eq!(v["rooms"][0]["objects"][5]["category"], 3);
        assert_eq!(v["rooms"][0]["objects"][5]["boxes"][0]["max"][1], 3.0);
    }

    #[test]
    fn basis_is_orthonormal_under_roll() {
        let cam = Camera::new(Vec3::ZERO, 0.7, 0.3, 0.4, 1.0, 4.0 / 3.0);
        let b = cam.basis();
        assert!((b.forward.norm() - 1.0).abs() < 1e-12);
        assert!((b.right.norm() - 1.0).abs() < 1e-12);
        assert!((b.up.norm() - 1.0).abs() < 1e-12);
        assert!(b.forward.dot(b.right).abs() < 1e-12);
        assert!(b.forward.dot(b.up).abs() < 1e-12);
        assert!(b.right.dot(b.up).abs() < 1e-12);
    }

    #[test]
    fn yaw_zero_faces_plus_x_with_z_up() {
        let cam = Camera::new(Vec3::ZERO, 0.0, 0.0, 0.0, 1.0, 4.0 / 3.0);
        let b = cam.basis();
        assert!((b.forward - Vec3::new(1.0, 0.0, 0.0)).norm() < 1e-12);
        assert!((b.right - Vec3::new(0.0, -1.0, 0.0)).norm() < 1e-12);
        assert!((b.up - Vec3::new(0.0, 0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn positive_pitch_looks_up() {
        let cam = Camera::new(Vec3::ZERO, 0.0, 0.5, 0.0, 1.0, 4.0 / 3.0);
        assert!(cam.basis().forward.z > 0.0);
    }

    #[test]
    fn center_pixel_ray_is_forward() {
        let cam = Camera::new(Vec3::ZERO, 1.1, -0.2, 0.0, 1.0, 4.0 / 3.0);
        let b = cam.basis();
        // Odd dimensions put a pixel center exactly on the optical axis.
        let dir = cam.pixel_ray(&b, 40, 30, 81, 61);
        assert!((dir - b.forward).norm() < 1e-12);
    }
}
