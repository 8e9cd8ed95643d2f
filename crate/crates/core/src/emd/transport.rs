//! Exact transport solvers for 1D histograms.
//!
//! The production path reduces the thresholded ground distance
//! min(|i - j|, t) to shortest-path costs on a sparse graph (a bin chain
//! plus a hub node whose spokes cost t/2) and runs successive-shortest-path
//! min-cost flow on it. The oracle solves the dense transportation LP
//! instead; the two share no solver code.

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum EmdError {
    #[error("histogram masses differ by {0:.3e} (limit 1e-9)")]
    MassMismatch(f64),
    #[error("bin counts differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("oracle restricted to 64 bins, got {0}")]
    OracleTooLarge(usize),
    #[error("LP solver failed: {0}")]
    Lp(String),
}

const MASS_TOLERANCE: f64 = 1e-9;

fn check_pair(h1: &[f64], h2: &[f64]) -> Result<(), EmdError> {
    if h1.len() != h2.len() {
        return Err(EmdError::LengthMismatch(h1.len(), h2.len()));
    }
    let gap = (h1.iter().sum::<f64>() - h2.iter().sum::<f64>()).abs();
    if gap > MASS_TOLERANCE {
        return Err(EmdError::MassMismatch(gap));
    }
    Ok(())
}

struct Arc {
    to: usize,
    rev: usize,
    cap: f64,
    cost: f64,
}

struct Graph {
    arcs: Vec<Vec<Arc>>,
}

impl Graph {
    fn new(n: usize) -> Self {
        Graph {
            arcs: (0..n).map(|_| Vec::new()).collect(),
        }
    }

    fn add_edge(&mut self, from: usize, to: usize, cap: f64, cost: f64) {
        let rev_from = self.arcs[to].len();
        let rev_to = self.arcs[from].len();
        self.arcs[from].push(Arc { to, rev: rev_from, cap, cost });
        self.arcs[to].push(Arc { to: from, rev: rev_to, cap: 0.0, cost: -cost });
    }

    /// Successive shortest paths with node potentials; pushes all available
    /// supply from `source` to `sink` and returns the total cost.
    fn min_cost_flow(&mut self, source: usize, sink: usize) -> f64 {
        const FLOW_EPS: f64 = 1e-13;
        let n = self.arcs.len();
        let mut potential = vec![0.0f64; n];
        let mut total_cost = 0.0;
        loop {
            // Dijkstra over reduced costs.
            let mut dist = vec![f64::INFINITY; n];
            let mut prev: Vec<Option<(usize, usize)>> = vec![None; n];
            let mut heap = std::collections::BinaryHeap::new();
            dist[source] = 0.0;
            heap.push(std::cmp::Reverse((ordered_float(0.0), source)));
            while let Some(std::cmp::Reverse((d, u))) = heap.pop() {
                let d = f64::from_bits(d.0);
                if d > dist[u] {
                    continue;
                }
                for (ai, arc) in self.arcs[u].iter().enumerate() {
                    if arc.cap <= FLOW_EPS {
                        continue;
                    }
                    let nd = d + arc.cost + potential[u] - potential[arc.to];
                    if nd < dist[arc.to] - 1e-15 {
                        dist[arc.to] = nd;
                        prev[arc.to] = Some((u, ai));
                        heap.push(std::cmp::Reverse((ordered_float(nd), arc.to)));
                    }
                }
            }
            if !dist[sink].is_finite() {
                break;
            }
            for v in 0..n {
                if dist[v].is_finite() {
                    potential[v] += dist[v];
                }
            }
            // Bottleneck along the path.
            let mut push = f64::INFINITY;
            let mut v = sink;
            while let Some((u, ai)) = prev[v] {
                push = push.min(self.arcs[u][ai].cap);
                v = u;
            }
            if push <= FLOW_EPS || !push.is_finite() {
                break;
            }
            let mut v = sink;
            while let Some((u, ai)) = prev[v] {
                let rev = self.arcs[u][ai].rev;
                self.arcs[u][ai].cap -= push;
                total_cost += self.arcs[u][ai].cost * push;
                self.arcs[v][rev].cap += push;
                v = u;
            }
        }
        total_cost
    }
}

#[derive(PartialEq, Eq, PartialOrd, Ord)]
struct OrdBits(u64);

fn ordered_float(v: f64) -> OrdBits {
    // Nonnegative finite distances only; bit order matches value order.
    OrdBits(v.to_bits())
}

/// Exact optimal-transport cost between equal-mass histograms under the
/// thresholded ground distance d(i, j) = min(|i - j|, t).
pub fn emd_thresholded(h1: &[f64], h2: &[f64], t: f64) -> Result<f64, EmdError> {
    check_pair(h1, h2)?;
    let b = h1.len();
    // Node layout: bins 0..b, hub = b, source = b+1, sink = b+2.
    let (hub, source, sink) = (b, b + 1, b + 2);
    let mut g = Graph::new(b + 3);
    const BIG: f64 = 1e18;
    for i in 0..b.saturating_sub(1) {
        g.add_edge(i, i + 1, BIG, 1.0);
        g.add_edge(i + 1, i, BIG, 1.0);
    }
    for i in 0..b {
        g.add_edge(i, hub, BIG, t / 2.0);
        g.add_edge(hub, i, BIG, t / 2.0);
    }
    for i in 0..b {
        if h1[i] > 0.0 {
            g.add_edge(source, i, h1[i], 0.0);
        }
        if h2[i] > 0.0 {
            g.add_edge(i, sink, h2[i], 0.0);
        }
    }
    Ok(g.min_cost_flow(source, sink).max(0.0))
}

/// Independent exact solver: the dense transportation problem as a linear
/// program over all bin-pair flows, with an arbitrary ground matrix.
pub fn transportation_oracle(
    h1: &[f64],
    h2: &[f64],
    ground: &dyn Fn(usize, usize) -> f64,
) -> Result<f64, EmdError> {
    check_pair(h1, h2)?;
    let b = h1.len();
    if b > 64 {
        return Err(EmdError::OracleTooLarge(b));
    }
    let mut problem = Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<Vec<minilp::Variable>> = (0..b)
        .map(|i| {
            (0..b)
                .map(|j| problem.add_var(ground(i, j), (0.0, f64::INFINITY)))
                .collect()
        })
        .collect();
    for i in 0..b {
        let row: Vec<(minilp::Variable, f64)> = (0..b).map(|j| (vars[i][j], 1.0)).collect();
        problem.add_constraint(&row, ComparisonOp::Eq, h1[i]);
    }
    // The final column constraint is implied by mass balance; dropping it
    // avoids an exactly redundant (and under float error, slightly
    // inconsistent) system.
    for j in 0..b - 1 {
        let col: Vec<(minilp::Variable, f64)> = (0..b).map(|i| (vars[i][j], 1.0)).collect();
        problem.add_constraint(&col, ComparisonOp::Eq, h2[j]);
    }
    let solution = problem.solve().map_err(|e| EmdError::Lp(e.to_string()))?;
    Ok(solution.objective().max(0.0))
}

/// Classic unthresholded 1D EMD via CDF differencing.
pub fn emd_classic_1d(h1: &[f64], h2: &[f64]) -> Result<f64, EmdError> {
    check_pair(h1, h2)?;
    let mut cdf_gap = 0.0;
    let mut total = 0.0;
    for (a, b) in h1.iter().zip(h2) {
        cdf_gap += a - b;
        total += cdf_gap.abs();
    }
    Ok(total)
}
