//! Floor-level occupancy grid for navigation-style baselines.

use super::Room;
use crate::categories::CategoryTable;
use thiserror::Error;

#[derive(Debug, Error)]
#[error("room {room_id:?} ({extent_x:.2} x {extent_y:.2} m) is smaller than one {cell} m cell")]
pub struct GridTooSmall {
    pub room_id: String,
    pub extent_x: f64,
    pub extent_y: f64,
    pub cell: f64,
}

/// 2D boolean grid over a room's floor. A cell is free unless its center
/// lies within `clearance` of some non-structural object box (projected to
/// the floor plane).
#[derive(Debug, Clone)]
pub struct FreeGrid {
    pub nx: usize,
    pub ny: usize,
    pub cell: f64,
    pub origin_x: f64,
    pub origin_y: f64,
    free: Vec<bool>,
}

impl FreeGrid {
    pub fn build(
        room: &Room,
        categories: &CategoryTable,
        cell: f64,
        clearance: f64,
    ) -> Result<FreeGrid, GridTooSmall> {
        assert!(cell > 0.0);
        let ext = room.bounds.extent();
        let nx = (ext.x / cell).floor() as usize;
        let ny = (ext.y / cell).floor() as usize;
        if nx == 0 || ny == 0 {
            return Err(GridTooSmall {
                room_id: room.id.clone(),
                extent_x: ext.x,
                extent_y: ext.y,
                cell,
            });
        }
        let mut grid = FreeGrid {
            nx,
            ny,
            cell,
            origin_x: room.bounds.min.x,
            origin_y: room.bounds.min.y,
            free: vec![true; nx * ny],
        };
        for obj in &room.objects {
            if categories.is_structural(obj.category) {
                continue;
            }
            for b in &obj.boxes {
                for j in 0..ny {
                    for i in 0..nx {
                        if grid.free[j * nx + i] {
                            let (cx, cy) = grid.center(i, j);
                            // Per-axis clearance (box grown by `clearance` in x
                            // and y), so a box obstructs a full rectangle of
                            // cells with no rounded corners.
                            let dx = (b.min.x - cx).max(cx - b.max.x);
                            let dy = (b.min.y - cy).max(cy - b.max.y);
                            if dx <= clearance && dy <= clearance {
                                grid.free[j * nx + i] = false;
                            }
                        }
                    }
                }
            }
        }
        Ok(grid)
    }

    pub fn center(&self, i: usize, j: usize) -> (f64, f64) {
        (
            self.origin_x + (i as f64 + 0.5) * self.cell,
            self.origin_y + (j as f64 + 0.5) * self.cell,
        )
    }

    pub fn is_free(&self, i: usize, j: usize) -> bool {
        self.free[j * self.nx + i]
    }

    pub fn free_count(&self) -> usize {
        self.free.iter().filter(|&&f| f).count()
    }

    /// Free cell indices in row-major order.
    /// Row-major index into the buffers returned by `bfs_distances`.
    pub fn cell_index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn free_cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.ny).flat_map(move |j| {
            (0..self.nx).filter_map(move |i| self.is_free(i, j).then_some((i, j)))
        })
    }

    /// 4-connected BFS hop counts from `start` over free cells; `None` for
    /// obstructed or unreachable cells.
    pub fn bfs_distances(&self, start: (usize, usize)) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.nx * self.ny];
        if !self.is_free(start.0, start.1) {
            return dist;
        }
        let mut queue = std::collections::VecDeque::new();
        dist[start.1 * self.nx + start.0] = Some(0);
        queue.push_back(start);
        while let Some((i, j)) = queue.pop_front() {
            let d = dist[j * self.nx + i].unwrap();
            for (ni, nj) in self.neighbors(i, j) {
                let idx = nj * self.nx + ni;
                if self.free[idx] && dist[idx].is_none() {
                    dist[idx] = Some(d + 1);
                    queue.push_back((ni, nj));
                }
            }
        }
        dist
    }

    /// Shortest 4-connected path over free cells, endpoints included.
    /// `None` when no route exists. Deterministic: BFS visits neighbors in a
    /// fixed order, so ties always resolve the same way.
    pub fn shortest_path(
        &self,
        from: (usize, usize),
        to: (usize, usize),
    ) -> Option<Vec<(usize, usize)>> {
        if !self.is_free(from.0, from.1) || !self.is_free(to.0, to.1) {
            return None;
        }
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; self.nx * self.ny];
        let mut seen = vec![false; self.nx * self.ny];
        let mut queue = std::collections::VecDeque::new();
        seen[from.1 * self.nx + from.0] = true;
        queue.push_back(from);
        while let Some((i, j)) = queue.pop_front() {
            if (i, j) == to {
                let mut path = vec![(i, j)];
                let mut cur = (i, j);
                while let Some(p) = parent[cur.1 * self.nx + cur.0] {
                    path.push(p);
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            for (ni, nj) in self.neighbors(i, j) {
                let idx = nj * self.nx + ni;
                if self.free[idx] && !seen[idx] {
                    seen[idx] = true;
                    parent[idx] = Some((i, j));
                    queue.push_back((ni, nj));
                }
            }
        }
        None
    }

    fn neighbors(&self, i: usize, j: usize) -> impl Iterator<Item = (usize, usize)> {
        let (nx, ny) = (self.nx, self.ny);
        [
            (i.wrapping_sub(1), j),
            (i + 1, j),
            (i, j.wrapping_sub(1)),
            (i, j + 1),
        ]
        .into_iter()
        .filter(move |&(a, b)| a < nx && b < ny)
    }
}
