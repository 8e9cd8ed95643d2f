//! Category tables and per-category weights.
//!
//! Categories are dense ids `0..n` into a name table. Renders use
//! [`BACKGROUND`] (255) for pixels that hit nothing, which caps usable
//! tables at 255 entries.

use serde::{Deserialize, Serialize};

/// Per-pixel sentinel for "no geometry here".
pub const BACKGROUND: u8 = 255;

/// Names treated as structural: they never receive a rebalance budget and
/// never obstruct navigation grids.
pub const STRUCTURAL_NAMES: [&str; 3] = ["wall", "floor", "ceiling"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CategoryTable {
    names: Vec<String>,
}

impl CategoryTable {
    pub fn new(names: Vec<String>) -> Self {
        assert!(
            names.len() < BACKGROUND as usize + 1,
            "category table too large for u8 ids with a 255 sentinel"
        );
        CategoryTable { names }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, id: u8) -> &str {
        &self.names[id as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn id_of(&self, name: &str) -> Option<u8> {
        self.names.iter().position(|n| n == name).map(|i| i as u8)
    }

    pub fn is_structural(&self, id: u8) -> bool {
        STRUCTURAL_NAMES.contains(&self.name(id))
    }

    /// The 40-class indoor taxonomy used as the default table.
    pub fn nyu40() -> Self {
        CategoryTable::new(NYU40_NAMES.iter().map(|s| s.to_string()).collect())
    }
}

pub const NYU40_NAMES: [&str; 40] = [
    "wall",
    "floor",
    "cabinet",
    "bed",
    "chair",
    "sofa",
    "table",
    "door",
    "window",
    "bookshelf",
    "picture",
    "counter",
    "blinds",
    "desk",
    "shelves",
    "curtain",
    "dresser",
    "pillow",
    "mirror",
    "floor_mat",
    "clothes",
    "ceiling",
    "books",
    "refridgerator",
    "television",
    "paper",
    "towel",
    "shower_curtain",
    "box",
    "whiteboard",
    "person",
    "night_stand",
    "toilet",
    "sink",
    "lamp",
    "bathtub",
    "bag",
    "otherstructure",
    "otherfurniture",
    "otherprop",
];

/// Rebalance weights for the 40-class table: example-corpus occurrence
/// divided by scene-corpus occurrence, with structural categories pinned to 1
/// and categories absent from the scene corpus at 0.
pub const NYU40_WEIGHTS: [f64; 40] = [
    1.0000,   // wall
    1.0000,   // floor
    1.0770,   // cabinet
    0.6267,   // bed
    0.8133,   // chair
    0.7622,   // sofa
    0.7552,   // table
    0.1293,   // door
    0.2678,   // window
    6.3694,   // bookshelf
    2.3617,   // picture
    0.2667,   // counter
    1.6238,   // blinds
    0.6391,   // desk
    0.4318,   // shelves
    0.4273,   // curtain
    0.5381,   // dresser
    11.8598,  // pillow
    0.7994,   // mirror
    0.2805,   // floor_mat
    38.6042,  // clothes
    1.0000,   // ceiling
    4.0946,   // books
    0.5520,   // refridgerator
    0.1626,   // television
    0.0,      // paper (absent from scene corpus)
    0.0,      // towel (absent from scene corpus)
    0.1942,   // shower_curtain
    0.0,      // box (absent from scene corpus)
    1.6733,   // whiteboard
    0.3813,   // person
    0.2648,   // night_stand
    0.1204,   // toilet
    0.4990,   // sink
    0.1518,   // lamp
    0.2869,   // bathtub
    0.0,      // bag (absent from scene corpus)
    2.8287,   // otherstructure
    497.8754, // otherfurniture
    1.1364,   // otherprop
];

/// Per-category multipliers w_c applied when scoring candidate images.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CategoryWeights {
    weights: Vec<f64>,
}

impl CategoryWeights {
    pub fn new(weights: Vec<f64>) -> Self {
        CategoryWeights { weights }
    }

    pub fn uniform(n: usize) -> Self {
        CategoryWeights { weights: vec![1.0; n] }
    }

    pub fn nyu40() -> Self {
        CategoryWeights { weights: NYU40_WEIGHTS.to_vec() }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn get(&self, id: u8) -> f64 {
        self.weights[id as usize]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }
}

/// Weight each category by how often it shows up in the example corpus
/// relative to the scene corpus. Categories the scenes never produce get 0
/// (there is nothing to boost), and structural categories stay at 1 so the
/// ubiquitous wall/floor/ceiling mass is neither boosted nor suppressed.
pub fn compute_rebalance_weights(
    table: &CategoryTable,
    example_freqs: &[u64],
    scene_freqs: &[u64],
) -> CategoryWeights {
    assert_eq!(example_freqs.len(), table.len());
    assert_eq!(scene_freqs.len(), table.len());
    let weights = (0..table.len())
        .map(|c| {
            if table.is_structural(c as u8) {
                1.0
            } else if scene_freqs[c] == 0 {
                0.0
            } else {
                example_freqs[c] as f64 / scene_freqs[c] as f64
            }
        })
        .collect();
    CategoryWeights { weights }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nyu40_shape() {
        let t = CategoryTable::nyu40();
        assert_eq!(t.len(), 40);
        assert_eq!(t.name(0), "wall");
        assert_eq!(t.name(1), "floor");
        assert_eq!(t.name(21), "ceiling");
        assert!(t.is_structural(0));
        assert!(t.is_structural(1));
        assert!(t.is_structural(21));
        assert!(!t.is_structural(3));
        assert_eq!(t.id_of("bed"), Some(3));
        assert_eq!(t.id_of("spaceship"), None);
    }

    #[test]
    fn nyu40_weight_spot_values() {
        let t = CategoryTable::nyu40();
        let w = CategoryWeights::nyu40();
        assert_eq!(w.get(t.id_of("wall").unwrap()), 1.0000);
        assert_eq!(w.get(t.id_of("pillow").unwrap()), 11.8598);
        assert_eq!(w.get(t.id_of("clothes").unwrap()), 38.6042);
        assert_eq!(w.get(t.id_of("otherfurniture").unwrap()), 497.8754);
        for name in ["paper", "towel", "box", "bag"] {
            assert_eq!(w.get(t.id_of(name).unwrap()), 0.0);
        }
    }

    #[test]
    fn rebalance_ratio_and_zero() {
        let t = CategoryTable::new(vec!["a".into(), "b".into(), "c".into()]);
        let w = compute_rebalance_weights(&t, &[10, 5, 7], &[10, 10, 0]);
        assert_eq!(w.as_slice(), &[1.0, 0.5, 0.0]);
    }

    #[test]
    fn rebalance_pins_structural() {
        let t = CategoryTable::new(vec!["wall".into(), "bed".into()]);
        let w = compute_rebalance_weights(&t, &[100, 3], &[2, 6]);
        assert_eq!(w.as_slice(), &[1.0, 0.5]);
    }
}
