//! View-set selection: a coverage-style objective over per-category score
//! vectors, maximized greedily.
//!
//! The objective F(S) sums, per category c, the h_c largest scores among the
//! selected views. It is nonnegative, monotone, and submodular, so plain
//! greedy is a 1/2-approximation and lazy greedy reproduces it exactly.

mod greedy;

pub use greedy::{brute_force_select, greedy_select, lazy_greedy_select, BruteForceError};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectionConfig {
    /// Maximum number of views to pick.
    pub k: usize,
    /// Per-category slot counts h_c.
    pub h: Vec<usize>,
}

impl SelectionConfig {
    /// Default slot allocation: h_c = floor(k / category count), at least 1.
    pub fn with_default_h(k: usize, n_categories: usize) -> Self {
        assert!(k >= 1 && n_categories >= 1);
        SelectionConfig {
            k,
            h: vec![(k / n_categories).max(1); n_categories],
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.k < 1 {
            return Err("k must be at least 1".into());
        }
        if self.h.iter().any(|&h| h < 1) {
            return Err("all h_c must be at least 1".into());
        }
        Ok(())
    }
}

/// Candidate reduced to what selection needs.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredView {
    pub id: u64,
    pub vector: Vec<f64>,
}

impl From<&crate::candgen::Candidate> for ScoredView {
    fn from(c: &crate::candgen::Candidate) -> Self {
        ScoredView {
            id: c.id,
            vector: c.vector.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pick {
    pub id: u64,
    pub gain_at_pick: f64,
}

/// Selection result: picks in order, with the objective they achieve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViewSet {
    pub picks: Vec<Pick>,
    pub objective: f64,
    pub config: SelectionConfig,
    /// Marginal-gain evaluations performed; instruments lazy vs naive.
    pub gain_evaluations: u64,
}

impl ViewSet {
    pub fn ids(&self) -> Vec<u64> {
        self.picks.iter().map(|p| p.id).collect()
    }
}

/// Fixed-size minheap holding exactly h values (zero-padded), so the root is
/// always the smallest committed score still counting toward the objective.
#[derive(Debug, Clone)]
struct SlotHeap {
    vals: Vec<f64>,
}

impl SlotHeap {
    fn new(h: usize) -> Self {
        SlotHeap { vals: vec![0.0; h] }
    }

    fn min(&self) -> f64 {
        self.vals[0]
    }

    /// Replaces the minimum with `v` (caller ensures v >= current min).
    fn replace_min(&mut self, v: f64) {
        self.vals[0] = v;
        let mut i = 0;
        loop {
            let (l, r) = (2 * i + 1, 2 * i + 2);
            let mut smallest = i;
            if l < self.vals.len() && self.vals[l] < self.vals[smallest] {
                smallest = l;
            }
            if r < self.vals.len() && self.vals[r] < self.vals[smallest] {
                smallest = r;
            }
            if smallest == i {
                break;
            }
            self.vals.swap(i, smallest);
            i = smallest;
        }
    }
}

/// Incremental objective state for greedy selection.
#[derive(Debug, Clone)]
pub struct SelectionState {
    heaps: Vec<SlotHeap>,
    selected: Vec<u64>,
    objective: f64,
}

impl SelectionState {
    pub fn new(h: &[usize]) -> Self {
        SelectionState {
            heaps: h.iter().map(|&hc| SlotHeap::new(hc)).collect(),
            selected: Vec::new(),
            objective: 0.0,
        }
    }

    pub fn selected(&self) -> &[u64] {
        &self.selected
    }

    pub fn objective(&self) -> f64 {
        self.objective
    }

    /// Current objective recomputed from heap contents; root-sum identity
    /// check for tests.
    pub fn heap_total(&self) -> f64 {
        self.heaps.iter().map(|h| h.vals.iter().sum::<f64>()).sum()
    }

    /// Exact marginal gain of adding `vector`: per category, the score only
    /// counts if it beats the smallest value currently holding a slot.
    pub fn marginal_gain(&self, vector: &[f64]) -> f64 {
        debug_assert_eq!(vector.len(), self.heaps.len());
        vector
            .iter()
            .zip(&self.heaps)
            .map(|(&v, heap)| (v - heap.min()).max(0.0))
            .sum()
    }

    /// Commits a view: each category's slot minimum is replaced by the score
    /// when the score beats it. Returns the realized gain.
    pub fn commit(&mut self, id: u64, vector: &[f64]) -> f64 {
        let mut gained = 0.0;
        for (&v, heap) in vector.iter().zip(&mut self.heaps) {
            let m = heap.min();
            if v > m {
                heap.replace_min(v);
                gained += v - m;
            }
        }
        self.selected.push(id);
        self.objective += gained;
        gained
    }
}

/// Reference objective: per category, the sum of the min(h_c, |S|) largest
/// scores across the set. Direct sort-based evaluation, independent of the
/// incremental heap state.
pub fn objective_value(vectors: &[&[f64]], h: &[usize]) -> f64 {
    let mut total = 0.0;
    let mut column = Vec::with_capacity(vectors.len());
    for (c, &hc) in h.iter().enumerate() {
        column.clear();
        column.extend(vectors.iter().map(|v| v[c]));
        column.sort_by(|a, b| b.total_cmp(a));
        total += column.iter().take(hc).sum::<f64>();
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn vecs<'a>(vs: &'a [Vec<f64>]) -> Vec<&'a [f64]> {
        vs.iter().map(|v| v.as_slice()).collect()
    }

    #[test]
    fn objective_examples() {
        let h = [1, 1];
        assert_eq!(objective_value(&[], &h), 0.0);
        let two = vec![vec![3.0, 0.0], vec![0.0, 3.0]];
        assert_eq!(objective_value(&vecs(&two), &h), 6.0);
        let three = vec![vec![3.0, 0.0], vec![0.0, 3.0], vec![2.0, 2.0]];
        assert_eq!(objective_value(&vecs(&three), &h), 6.0);
    }

    #[test]
    fn objective_counts_duplicates_as_multiset() {
        let vs = vec![vec![2.0], vec![2.0], vec![2.0]];
        assert_eq!(objective_value(&vecs(&vs), &[2]), 4.0);
    }

    #[test]
    fn gain_on_empty_state_is_vector_sum() {
        let state = SelectionState::new(&[1, 1]);
        assert_eq!(state.marginal_gain(&[3.0, 0.0]), 3.0);
    }

    #[test]
    fn gain_matches_objective_difference() {
        let h = [1usize, 1];
        let mut state = SelectionState::new(&h);
        state.commit(0, &[3.0, 0.0]);
        state.commit(1, &[0.0, 3.0]);
        let before = objective_value(&[&[3.0, 0.0], &[0.0, 3.0]], &h);
        let after = objective_value(&[&[3.0, 0.0], &[0.0, 3.0], &[2.0, 2.0]], &h);
        assert_eq!(state.marginal_gain(&[2.0, 2.0]), after - before);
        assert_eq!(state.marginal_gain(&[2.0, 2.0]), 0.0);

        let mut state = SelectionState::new(&h);
        state.commit(0, &[2.0, 2.0]);
        let before = objective_value(&[&[2.0, 2.0]], &h);
        let after = objective_value(&[&[2.0, 2.0], &[3.0, 0.0]], &h);
        assert_eq!(state.marginal_gain(&[3.0, 0.0]), 1.0);
        assert_eq!(after - before, 1.0);
    }

    #[test]
    fn commit_keeps_heap_and_objective_consistent() {
        let h = [2usize, 3];
        let mut state = SelectionState::new(&h);
        let views = [
            vec![1.0, 5.0],
            vec![4.0, 2.0],
            vec![3.0, 3.0],
            vec![2.0, 4.0],
        ];
        let mut committed: Vec<&[f64]> = Vec::new();
        for (i, v) in views.iter().enumerate() {
            let expected_gain =
                objective_value(&[committed.as_slice(), &[v.as_slice()]].concat(), &h)
                    - objective_value(&committed, &h);
            let gain = state.commit(i as u64, v);
            committed.push(v);
            assert!((gain - expected_gain).abs() < 1e-12);
            assert!((state.objective() - objective_value(&committed, &h)).abs() < 1e-9);
            assert!((state.heap_total() - state.objective()).abs() < 1e-9);
        }
    }

    #[test]
    fn default_h_floors_and_clamps() {
        assert_eq!(SelectionConfig::with_default_h(40, 40).h, vec![1; 40]);
        assert_eq!(SelectionConfig::with_default_h(400, 40).h, vec![10; 40]);
        // k < n would floor to zero; clamp keeps the heaps meaningful.
        assert_eq!(SelectionConfig::with_default_h(7, 40).h, vec![1; 40]);
    }

    fn arb_instance() -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<usize>)> {
        (1usize..5, 1usize..9).prop_flat_map(|(n_cat, n_views)| {
            (
                proptest::collection::vec(
                    proptest::collection::vec(0.0f64..10.0, n_cat),
                    n_views,
                ),
                proptest::collection::vec(1usize..4, n_cat),
            )
        })
    }

    proptest! {
        #[test]
        fn monotone_and_submodular((views, h) in arb_instance()) {
            // A = prefix, B = A plus more, e = last view (not in B).
            prop_assume!(views.len() >= 2);
            let e = views.last().unwrap().as_slice();
            let rest = &views[..views.len() - 1];
            let split = rest.len() / 2;
            let a: Vec<&[f64]> = rest[..split].iter().map(|v| v.as_slice()).collect();
            let b: Vec<&[f64]> = rest.iter().map(|v| v.as_slice()).collect();

            // Monotonicity.
            let fa = objective_value(&a, &h);
            let fae = objective_value(&[a.clone(), vec![e]].concat(), &h);
            prop_assert!(fae >= fa - 1e-12);

            // Submodularity: gain at the smaller set dominates.
            let fb = objective_value(&b, &h);
            let fbe = objective_value(&[b.clone(), vec![e]].concat(), &h);
            prop_assert!((fae - fa) >= (fbe - fb) - 1e-12);
        }

        #[test]
        fn incremental_state_tracks_reference((views, h) in arb_instance()) {
            let mut state = SelectionState::new(&h);
            let mut committed: Vec<&[f64]> = Vec::new();
            for (i, v) in views.iter().enumerate() {
                let gain = state.marginal_gain(v);
                let direct = objective_value(
                    &[committed.as_slice(), &[v.as_slice()]].concat(),
                    &h,
                ) - objective_value(&committed, &h);
                prop_assert!((gain - direct).abs() < 1e-9);
                state.commit(i as u64, v);
                committed.push(v);
            }
            prop_assert!((state.objective() - objective_value(&committed, &h)).abs() < 1e-9);
        }
    }
}
