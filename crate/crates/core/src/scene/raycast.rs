//! Nearest-hit raycasting against scene geometry.

use super::{Room, Scene};
use crate::geom::{Aabb, Vec3};

/// Nearest intersection along a ray. `distance` is euclidean ray length
/// (the ray direction is unit), `point` = origin + dir * distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hit {
    pub point: Vec3,
    pub distance: f64,
    pub category: u8,
    pub room: usize,
    pub object: usize,
}

fn nearest_in_room(
    room: &Room,
    room_idx: usize,
    origin: Vec3,
    dir: Vec3,
    best: &mut Option<Hit>,
) {
    for (oi, obj) in room.objects.iter().enumerate() {
        for b in &obj.boxes {
            if let Some(t) = b.ray_hit(origin, dir) {
                if best.map_or(true, |h| t < h.distance) {
                    *best = Some(Hit {
                        point: origin + dir * t,
                        distance: t,
                        category: obj.category,
                        room: room_idx,
                        object: oi,
                    });
                }
            }
        }
    }
}

impl Scene {
    /// Nearest positive-t hit over every box in the scene, or `None` on miss.
    /// `dir` must be unit length.
    pub fn ray_intersect(&self, origin: Vec3, dir: Vec3) -> Option<Hit> {
        let mut best = None;
        for (ri, room) in self.rooms.iter().enumerate() {
            nearest_in_room(room, ri, origin, dir, &mut best);
        }
        best
    }
}

/// Raycast accelerator: tests each room's envelope box before scanning its
/// contents. Produces exactly the hits of [`Scene::ray_intersect`].
pub struct SceneIndex<'a> {
    scene: &'a Scene,
    envelopes: Vec<Aabb>,
}

impl<'a> SceneIndex<'a> {
    pub fn new(scene: &'a Scene) -> Self {
        SceneIndex {
            scene,
            envelopes: scene.rooms.iter().map(Room::envelope).collect(),
        }
    }

    pub fn scene(&self) -> &'a Scene {
        self.scene
    }

    pub fn ray_intersect(&self, origin: Vec3, dir: Vec3) -> Option<Hit> {
        let mut best: Option<Hit> = None;
        for (ri, room) in self.scene.rooms.iter().enumerate() {
            match self.envelopes[ri].ray_interval(origin, dir) {
                // Envelope interval entirely behind the origin, or entering
                // beyond the best hit so far: nothing inside can win.
                Some((t0, t1)) => {
                    if t1 <= 0.0 || best.is_some_and(|h| t0 >= h.distance) {
                        continue;
                    }
                }
                None => continue,
            }
            nearest_in_room(room, ri, origin, dir, &mut best);
        }
        best
    }
}
