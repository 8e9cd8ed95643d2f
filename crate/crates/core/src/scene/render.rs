//! CPU renderer: one primary ray per pixel center, nearest hit wins.

use super::raycast::SceneIndex;
use super::{Camera, Scene, SemanticDepthImage};

/// Background marker in the per-pixel object buffer of
/// [`SceneIndex::render_instances`].
pub const NO_OBJECT: u32 = u32::MAX;

/// Packs a (room index, object index) pair into the instance buffer.
pub fn pack_instance(room: usize, object: usize) -> u32 {
    debug_assert!(room < 0xFFFF && object < 0xFFFF);
    ((room as u32) << 16) | object as u32
}

impl SceneIndex<'_> {
    /// Renders category and z-depth buffers. Depth is the hit distance
    /// projected onto the optical axis, so a frustum-filling plane reads a
    /// constant value across the image.
    pub fn render(&self, camera: &Camera, width: u32, height: u32) -> SemanticDepthImage {
        self.render_with(camera, width, height, |_, _, _| {})
    }

    /// As [`render`](Self::render), also recording which object each pixel
    /// shows (packed room/object pair, [`NO_OBJECT`] on background).
    pub fn render_instances(
        &self,
        camera: &Camera,
        width: u32,
        height: u32,
    ) -> (SemanticDepthImage, Vec<u32>) {
        let mut objects = vec![NO_OBJECT; (width as usize) * (height as usize)];
        let image = self.render_with(camera, width, height, |idx, room, object| {
            objects[idx] = pack_instance(room, object);
        });
        (image, objects)
    }

    fn render_with(
        &self,
        camera: &Camera,
        width: u32,
        height: u32,
        mut on_hit: impl FnMut(usize, usize, usize),
    ) -> SemanticDepthImage {
        assert!(width >= 1 && height >= 1);
        let basis = camera.basis();
        let mut image = SemanticDepthImage::new(width, height);
        for py in 0..height {
            for px in 0..width {
                let dir = camera.pixel_ray(&basis, px, py, width, height);
                if let Some(hit) = self.ray_intersect(camera.position, dir) {
                    let idx = image.idx(px, py);
                    image.category[idx] = hit.category;
                    image.depth[idx] = hit.distance * dir.dot(basis.forward);
                    on_hit(idx, hit.room, hit.object);
                }
            }
        }
        image
    }
}

pub fn render_view(scene: &Scene, camera: &Camera, width: u32, height: u32) -> SemanticDepthImage {
    SceneIndex::new(scene).render(camera, width, height)
}
