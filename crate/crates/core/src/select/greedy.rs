//! Greedy maximizers over the selection objective, plus an exhaustive
//! oracle for small instances.

use super::{Pick, ScoredView, SelectionConfig, SelectionState, ViewSet};
use itertools::Itertools;
use std::cmp::Reverse;
use std::collections::BinaryHeap;
use thiserror::Error;

/// Plain greedy: k rounds, each scanning every unselected candidate for the
/// maximal marginal gain (ties to the smaller id), stopping early once the
/// best gain hits zero.
pub fn greedy_select(candidates: &[ScoredView], cfg: &SelectionConfig) -> ViewSet {
    let mut state = SelectionState::new(&cfg.h);
    let mut taken = vec![false; candidates.len()];
    let mut picks = Vec::new();
    let mut evaluations = 0u64;
    for _ in 0..cfg.k.min(candidates.len()) {
        let mut best: Option<(f64, usize)> = None;
        for (i, cand) in candidates.iter().enumerate() {
            if taken[i] {
                continue;
            }
            let gain = state.marginal_gain(&cand.vector);
            evaluations += 1;
            let wins = match best {
                None => true,
                Some((bg, bi)) => {
                    gain > bg || (gain == bg && cand.id < candidates[bi].id)
                }
            };
            if wins {
                best = Some((gain, i));
            }
        }
        match best {
            Some((gain, i)) if gain > 0.0 => {
                state.commit(candidates[i].id, &candidates[i].vector);
                taken[i] = true;
                picks.push(Pick {
                    id: candidates[i].id,
                    gain_at_pick: gain,
                });
            }
            _ => break,
        }
    }
    ViewSet {
        picks,
        objective: state.objective(),
        config: cfg.clone(),
        gain_evaluations: evaluations,
    }
}

/// Heap entry ordered by (gain descending, id ascending).
#[derive(PartialEq)]
struct Entry {
    gain: f64,
    id: u64,
    index: usize,
    /// Round whose state this gain was computed against.
    round: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.gain
            .total_cmp(&other.gain)
            .then_with(|| Reverse(self.id).cmp(&Reverse(other.id)))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Lazy greedy: cached gains are upper bounds (submodularity only shrinks
/// them), so a popped entry whose refreshed gain still beats the next cached
/// bound is the true argmax. Output is identical to [`greedy_select`],
/// including tie order; only the evaluation count differs.
pub fn lazy_greedy_select(candidates: &[ScoredView], cfg: &SelectionConfig) -> ViewSet {
    let mut state = SelectionState::new(&cfg.h);
    let mut picks = Vec::new();
    let mut evaluations = 0u64;
    let mut heap: BinaryHeap<Entry> = candidates
        .iter()
        .enumerate()
        .map(|(index, cand)| {
            evaluations += 1;
            Entry {
                gain: state.marginal_gain(&cand.vector),
                id: cand.id,
                index,
                round: 0,
            }
        })
        .collect();

    for round in 0..cfg.k.min(candidates.len()) {
        let accepted = loop {
            let Some(mut top) = heap.pop() else { break None };
            if top.round < round {
                top.gain = state.marginal_gain(&candidates[top.index].vector);
                top.round = round;
                evaluations += 1;
                // Fresh gain must still beat (or tie ahead of, by id) every
                // remaining cached bound to be the argmax.
                if let Some(next) = heap.peek() {
                    if top.cmp(next) == std::cmp::Ordering::Less {
                        heap.push(top);
                        continue;
                    }
                }
            }
            break Some(top);
        };
        match accepted {
            Some(entry) if entry.gain > 0.0 => {
                state.commit(entry.id, &candidates[entry.index].vector);
                picks.push(Pick {
                    id: entry.id,
                    gain_at_pick: entry.gain,
                });
            }
            _ => break,
        }
    }
    ViewSet {
        picks,
        objective: state.objective(),
        config: cfg.clone(),
        gain_evaluations: evaluations,
    }
}

#[derive(Debug, Error)]
#[error("brute force would enumerate {combinations} subsets (limit {limit})")]
pub struct BruteForceError {
    pub combinations: u128,
    pub limit: u128,
}

const BRUTE_FORCE_LIMIT: u128 = 1_000_000;

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k.min(n));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Exhaustive optimum over all subsets of size at most k. Monotonicity means
/// only the largest size matters, so exactly min(k, |candidates|)-sized
/// subsets are enumerated. Ties resolve to the first subset in
/// lexicographic index order.
pub fn brute_force_select(
    candidates: &[ScoredView],
    cfg: &SelectionConfig,
) -> Result<(Vec<u64>, f64), BruteForceError> {
    let m = cfg.k.min(candidates.len());
    let combinations = binomial(candidates.len(), m);
    if combinations > BRUTE_FORCE_LIMIT {
        return Err(BruteForceError {
            combinations,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let mut best_value = 0.0f64;
    let mut best_ids: Vec<u64> = Vec::new();
    for combo in (0..candidates.len()).combinations(m) {
        let vectors: Vec<&[f64]> = combo.iter().map(|&i| candidates[i].vector.as_slice()).collect();
        let value = super::objective_value(&vectors, &cfg.h);
        if value > best_value || best_ids.is_empty() {
            best_value = value;
            best_ids = combo.iter().map(|&i| candidates[i].id).collect();
        }
    }
    Ok((best_ids, best_value))
}
