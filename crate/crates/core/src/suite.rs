//! Synthetic apartment suite: seeded scenes plus a ground-truth camera
//! distribution for rendering an example set.
//!
//! Rooms are sealed boxes (four walls, floor, ceiling) furnished from five
//! archetype item lists. Ground-truth cameras imitate handheld capture:
//! eye-height positions in free space, uniform yaw, slightly downward pitch.

use crate::baselines::PlacedView;
use crate::categories::CategoryTable;
use crate::geom::{Aabb, Vec3};
use crate::room_seed;
use crate::scene::{Camera, Room, Scene, SceneObject};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct SuiteConfig {
    pub rooms: usize,
    pub seed: u64,
    pub cameras_per_room: usize,
    pub hfov: f64,
    pub aspect: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            rooms: 5,
            seed: 7,
            cameras_per_room: 40,
            hfov: 57.0f64.to_radians(),
            aspect: 4.0 / 3.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Suite {
    pub scene: Scene,
    pub ground_truth: Vec<PlacedView>,
}

const WALL_T: f64 = 0.08;
const ROOM_GAP: f64 = 2.0;

#[derive(Debug, Clone, Copy)]
enum Archetype {
    Bedroom,
    Living,
    Office,
    Kitchen,
    Bathroom,
}

const ARCHETYPES: [Archetype; 5] = [
    Archetype::Bedroom,
    Archetype::Living,
    Archetype::Office,
    Archetype::Kitchen,
    Archetype::Bathroom,
];

impl Archetype {
    fn name(self) -> &'static str {
        match self {
            Archetype::Bedroom => "bedroom",
            Archetype::Living => "living",
            Archetype::Office => "office",
            Archetype::Kitchen => "kitchen",
            Archetype::Bathroom => "bathroom",
        }
    }

    /// (width, length) sampling range in meters; areas stay well inside
    /// the acceptable 8..100 m² band even at the extremes.
    fn footprint(self) -> ((f64, f64), (f64, f64)) {
        match self {
            Archetype::Bedroom => ((3.2, 4.5), (3.5, 5.0)),
            Archetype::Living => ((4.0, 6.0), (4.5, 7.0)),
            Archetype::Office => ((3.0, 4.5), (3.2, 5.0)),
            Archetype::Kitchen => ((3.0, 4.0), (3.5, 5.5)),
            Archetype::Bathroom => ((2.9, 3.4), (2.9, 3.6)),
        }
    }

    fn items(self) -> Vec<Item> {
        let f = |cat, w, l, h| Item { cat, size: (w, l, h), mount: Mount::Floor };
        let wall = |cat, w, h, z| Item { cat, size: (w, 0.06, h), mount: Mount::Wall { base: z } };
        match self {
            Archetype::Bedroom => vec![
                f("bed", 1.6, 2.0, 0.55),
                Item { cat: "pillow", size: (0.6, 0.4, 0.15), mount: Mount::OnTop(0) },
                f("night_stand", 0.45, 0.45, 0.55),
                f("night_stand", 0.45, 0.45, 0.55),
                f("dresser", 1.2, 0.5, 0.95),
                f("lamp", 0.3, 0.3, 1.5),
                wall("picture", 0.8, 0.6, 1.2),
            ],
            Archetype::Living => vec![
                f("sofa", 2.0, 0.9, 0.8),
                f("table", 1.1, 0.6, 0.45),
                f("bookshelf", 0.9, 0.35, 1.8),
                f("lamp", 0.35, 0.35, 1.6),
                Item { cat: "pillow", size: (0.5, 0.4, 0.15), mount: Mount::OnTop(0) },
                wall("television", 1.2, 0.7, 1.0),
                wall("curtain", 1.6, 1.9, 0.5),
            ],
            Archetype::Office => vec![
                f("desk", 1.5, 0.75, 0.74),
                f("chair", 0.5, 0.5, 0.95),
                f("chair", 0.5, 0.5, 0.95),
                f("bookshelf", 0.9, 0.35, 1.9),
                f("cabinet", 0.8, 0.45, 1.1),
                Item { cat: "books", size: (0.5, 0.3, 0.25), mount: Mount::OnTop(0) },
                wall("whiteboard", 1.4, 0.9, 1.0),
            ],
            Archetype::Kitchen => vec![
                f("counter", 2.2, 0.6, 0.9),
                f("cabinet", 0.8, 0.6, 0.9),
                f("refridgerator", 0.7, 0.7, 1.8),
                f("table", 1.0, 1.0, 0.75),
                f("chair", 0.45, 0.45, 0.9),
                f("chair", 0.45, 0.45, 0.9),
                Item { cat: "sink", size: (0.5, 0.4, 0.2), mount: Mount::OnTop(0) },
            ],
            Archetype::Bathroom => vec![
                f("toilet", 0.45, 0.7, 0.75),
                f("bathtub", 1.6, 0.75, 0.55),
                f("sink", 0.55, 0.45, 0.85),
                f("box", 0.4, 0.3, 0.3),
                wall("mirror", 0.6, 0.8, 1.1),
                wall("towel", 0.5, 0.7, 0.9),
            ],
        }
    }
}

struct Item {
    cat: &'static str,
    size: (f64, f64, f64),
    mount: Mount,
}

enum Mount {
    Floor,
    /// Flush against a random wall, bottom edge at `base` above the floor.
    Wall { base: f64 },
    /// Resting on the top face of a previously placed floor item.
    OnTop(usize),
}

fn build_room(
    archetype: Archetype,
    index: usize,
    x_offset: f64,
    table: &CategoryTable,
    rng: &mut ChaCha8Rng,
) -> Room {
    let ((w_lo, w_hi), (l_lo, l_hi)) = archetype.footprint();
    let w = rng.gen_range(w_lo..w_hi);
    let l = rng.gen_range(l_lo..l_hi);
    let h = rng.gen_range(2.5..2.7);
    let min = Vec3::new(x_offset, 0.0, 0.0);
    let max = Vec3::new(x_offset + w, l, h);
    let bounds = Aabb::from_corners(min, max);

    let cat = |name: &str| table.id_of(name).expect("suite uses table names only");
    let slab = |a: Vec3, b: Vec3, c: u8| SceneObject {
        category: c,
        boxes: vec![Aabb::from_corners(a, b)],
    };
    let mut objects = vec![
        slab(min, Vec3::new(max.x, max.y, min.z + WALL_T), cat("floor")),
        slab(Vec3::new(min.x, min.y, max.z - WALL_T), max, cat("ceiling")),
        slab(min, Vec3::new(min.x + WALL_T, max.y, max.z), cat("wall")),
        slab(Vec3::new(max.x - WALL_T, min.y, min.z), max, cat("wall")),
        slab(min, Vec3::new(max.x, min.y + WALL_T, max.z), cat("wall")),
        slab(Vec3::new(min.x, max.y - WALL_T, min.z), max, cat("wall")),
    ];

    // Furniture lives in the interior shrunk clear of the wall slabs.
    let inner = Aabb::from_corners(
        Vec3::new(min.x + WALL_T + 0.04, min.y + WALL_T + 0.04, min.z + WALL_T),
        Vec3::new(max.x - WALL_T - 0.04, max.y - WALL_T - 0.04, max.z - WALL_T),
    );
    let mut placed: Vec<Aabb> = Vec::new();
    for item in archetype.items() {
        let (iw, il, ih) = item.size;
        let jitter = rng.gen_range(0.92..1.08);
        let (iw, il, ih) = (iw * jitter, il * jitter, ih * jitter);
        let b = match item.mount {
            Mount::Floor => place_on_floor(&inner, (iw, il, ih), &placed, rng),
            Mount::Wall { base } => place_on_wall(&inner, (iw, il, ih), base, rng),
            Mount::OnTop(i) => {
                let host = placed[i];
                let cx = host.center().x + rng.gen_range(-0.1..0.1);
                let cy = host.center().y + rng.gen_range(-0.1..0.1);
                Aabb::from_corners(
                    Vec3::new(cx - iw / 2.0, cy - il / 2.0, host.max.z),
                    Vec3::new(cx + iw / 2.0, cy + il / 2.0, host.max.z + ih),
                )
            }
        };
        placed.push(b);
        objects.push(SceneObject { category: cat(item.cat), boxes: vec![b] });
    }

    Room {
        id: format!("{}_{index}", archetype.name()),
        bounds,
        objects,
    }
}

fn place_on_floor(
    inner: &Aabb,
    size: (f64, f64, f64),
    placed: &[Aabb],
    rng: &mut ChaCha8Rng,
) -> Aabb {
    let (w, l, h) = size;
    let mut fallback = None;
    for attempt in 0..40 {
        let x = rng.gen_range(inner.min.x..(inner.max.x - w).max(inner.min.x + 1e-6));
        let y = rng.gen_range(inner.min.y..(inner.max.y - l).max(inner.min.y + 1e-6));
        let b = Aabb::from_corners(
            Vec3::new(x, y, inner.min.z),
            Vec3::new(x + w, y + l, inner.min.z + h),
        );
        let clear = placed.iter().all(|p| !p.overlaps(&b));
        if clear {
            return b;
        }
        if attempt == 0 {
            fallback = Some(b);
        }
    }
    // Crowded room: overlapping furniture is ugly but valid geometry.
    fallback.unwrap()
}

fn place_on_wall(inner: &Aabb, size: (f64, f64, f64), base: f64, rng: &mut ChaCha8Rng) -> Aabb {
    let (w, depth, h) = size;
    let side = rng.gen_range(0..4u8);
    let z0 = inner.min.z + base;
    let z1 = (z0 + h).min(inner.max.z - 0.02);
    match side {
        0 => {
            let y = rng.gen_range(inner.min.y..(inner.max.y - w).max(inner.min.y + 1e-6));
            Aabb::from_corners(
                Vec3::new(inner.min.x, y, z0),
                Vec3::new(inner.min.x + depth, y + w, z1),
            )
        }
        1 => {
            let y = rng.gen_range(inner.min.y..(inner.max.y - w).max(inner.min.y + 1e-6));
            Aabb::from_corners(
                Vec3::new(inner.max.x - depth, y, z0),
                Vec3::new(inner.max.x, y + w, z1),
            )
        }
        2 => {
            let x = rng.gen_range(inner.min.x..(inner.max.x - w).max(inner.min.x + 1e-6));
            Aabb::from_corners(
                Vec3::new(x, inner.min.y, z0),
                Vec3::new(x + w, inner.min.y + depth, z1),
            )
        }
        _ => {
            let x = rng.gen_range(inner.min.x..(inner.max.x - w).max(inner.min.x + 1e-6));
            Aabb::from_corners(
                Vec3::new(x, inner.max.y - depth, z0),
                Vec3::new(x + w, inner.max.y, z1),
            )
        }
    }
}

fn ground_truth_cameras(room: &Room, cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> Vec<PlacedView> {
    let eye = Normal::<f64>::new(1.55, 0.08).unwrap();
    let pitch_deg = Normal::<f64>::new(-10.0, 8.0).unwrap();
    let margin = WALL_T + 0.25;
    let mut views = Vec::with_capacity(cfg.cameras_per_room);
    for _ in 0..cfg.cameras_per_room {
        let z = room.floor_z() + eye.sample(rng).clamp(1.2, 2.0);
        let mut position = room.bounds.center();
        position.z = z;
        for _ in 0..100 {
            let x = rng.gen_range((room.bounds.min.x + margin)..(room.bounds.max.x - margin));
            let y = rng.gen_range((room.bounds.min.y + margin)..(room.bounds.max.y - margin));
            let p = Vec3::new(x, y, z);
            let clear = !room
                .objects
                .iter()
                .any(|o| o.boxes.iter().any(|b| b.contains(p)));
            if clear {
                position = p;
                break;
            }
        }
        let yaw = rng.gen_range(0.0..TAU);
        let pitch = pitch_deg.sample(rng).clamp(-45.0, 25.0).to_radians();
        views.push(PlacedView {
            room: room.id.clone(),
            camera: Camera::new(position, yaw, pitch, 0.0, cfg.hfov, cfg.aspect),
        });
    }
    views
}

/// Builds the furnished scene and its ground-truth cameras. Each room uses
/// an rng derived from (seed, room id), so room contents never depend on
/// how many rooms precede them.
pub fn build_suite(cfg: &SuiteConfig) -> Suite {
    let table = CategoryTable::nyu40();
    let mut rooms = Vec::with_capacity(cfg.rooms);
    let mut ground_truth = Vec::new();
    let mut x_offset = 0.0;
    for i in 0..cfg.rooms {
        let archetype = ARCHETYPES[i % ARCHETYPES.len()];
        let id = format!("{}_{i}", archetype.name());
        let mut rng = ChaCha8Rng::seed_from_u64(room_seed(cfg.seed, &id));
        let room = build_room(archetype, i, x_offset, &table, &mut rng);
        x_offset = room.bounds.max.x + ROOM_GAP;
        ground_truth.extend(ground_truth_cameras(&room, cfg, &mut rng));
        rooms.push(room);
    }
    Suite {
        scene: Scene { categories: table, rooms },
        ground_truth,
    }
}
