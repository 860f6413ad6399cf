//! Exact solver for the balanced transportation problem
//!
//! ```text
//! minimize    sum_ij T_ij * C_ij
//! subject to  sum_j T_ij = src_i,  sum_i T_ij = dst_j,  T_ij >= 0
//! ```
//!
//! Marginals are scaled onto an integer grid of [`GRID`] units (largest
//! remainder rounding keeps both totals exact) and the problem is solved as a
//! minimum-cost flow on the bipartite graph `source -> rows -> columns ->
//! sink` by successive shortest augmenting paths. Dijkstra runs on reduced
//! costs with node potentials, so every augmentation keeps the flow optimal
//! for the amount shipped so far.
//!
//! The grid optimum is then polished: its support is reduced to a forest,
//! completed to a spanning tree with the tightest remaining edges, and the
//! tree flows are recomputed from the exact marginals. That removes the
//! rounding error of the grid from both the plan and the objective.

use ndarray::Array2;

use crate::error::{Error, Result};

/// Number of integer flow units per unit of probability mass.
pub const GRID: u64 = 1_000_000_000;

/// Marginal sums may deviate from 1 by at most this much.
pub const MARGINAL_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct TransportPlan {
    /// `flow[[i, j]]` is the mass moved from source `i` to target `j`.
    pub flow: Array2<f64>,
    pub objective: f64,
}

impl TransportPlan {
    pub fn row_sums(&self) -> Vec<f64> {
        self.flow.rows().into_iter().map(|r| r.sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        self.flow.columns().into_iter().map(|c| c.sum()).collect()
    }

    /// Flow-weighted cost under `cost`, recomputed from the plan.
    pub fn cost(&self, cost: &Array2<f64>) -> f64 {
        plan_cost(&self.flow, cost)
    }
}

pub fn plan_cost(flow: &Array2<f64>, cost: &Array2<f64>) -> f64 {
    flow.iter().zip(cost.iter()).map(|(t, c)| t * c).sum()
}

fn validate(src: &[f64], dst: &[f64], cost: &Array2<f64>) -> Result<()> {
    if src.is_empty() || dst.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    if cost.dim() != (src.len(), dst.len()) {
        return Err(Error::InvalidTransport(format!(
            "cost matrix is {:?}, marginals are {}x{}",
            cost.dim(),
            src.len(),
            dst.len()
        )));
    }
    if let Some(c) = cost.iter().find(|c| !c.is_finite() || **c < 0.0) {
        return Err(Error::InvalidTransport(format!(
            "costs must be finite and non-negative, found {c}"
        )));
    }
    if let Some(w) = src.iter().chain(dst).find(|w| !w.is_finite() || **w < 0.0) {
        return Err(Error::InvalidTransport(format!(
            "weights must be finite and non-negative, found {w}"
        )));
    }
    let (source_sum, target_sum): (f64, f64) = (src.iter().sum(), dst.iter().sum());
    if (source_sum - 1.0).abs() > MARGINAL_TOLERANCE || (target_sum - 1.0).abs() > MARGINAL_TOLERANCE
    {
        return Err(Error::InfeasibleMarginals {
            source_sum,
            target_sum,
        });
    }
    Ok(())
}

/// Renormalizes `weights` and rounds them to integer units summing to
/// exactly [`GRID`].
fn to_grid(weights: &[f64]) -> Vec<u64> {
    let total: f64 = weights.iter().sum();
    let scaled: Vec<f64> = weights.iter().map(|w| w / total * GRID as f64).collect();
    let mut units: Vec<u64> = scaled.iter().map(|x| x.floor() as u64).collect();
    let assigned: u64 = units.iter().sum();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by(|&a, &b| {
        let fa = scaled[a] - scaled[a].floor();
        let fb = scaled[b] - scaled[b].floor();
        fb.total_cmp(&fa).then(a.cmp(&b))
    });
    let mut remaining = GRID.saturating_sub(assigned);
    for &i in order.iter().cycle() {
        if remaining == 0 {
            break;
        }
        units[i] += 1;
        remaining -= 1;
    }
    units
}

pub fn solve_transport(src: &[f64], dst: &[f64], cost: &Array2<f64>) -> Result<TransportPlan> {
    validate(src, dst, cost)?;
    let supply = to_grid(src);
    let demand = to_grid(dst);
    let (units, potential) = FlowNetwork::new(&supply, &demand, cost).solve();
    let flow = polish(units.clone(), &potential, src, dst, cost)
        .unwrap_or_else(|| units.mapv(|u| u as f64 / GRID as f64));
    let objective = plan_cost(&flow, cost);
    Ok(TransportPlan { flow, objective })
}

/// Residual state of the bipartite flow network. Nodes are numbered rows
/// `0..n`, columns `n..n + m`, then source and sink.
struct FlowNetwork<'a> {
    n: usize,
    m: usize,
    supply: &'a [u64],
    demand: &'a [u64],
    cost: &'a Array2<f64>,
    sent: Vec<u64>,
    received: Vec<u64>,
    flow: Array2<u64>,
    potential: Vec<f64>,
}

#[derive(Clone, Copy)]
enum Step {
    SourceToRow,
    RowToCol,
    ColToRow,
    ColToSink,
}

impl<'a> FlowNetwork<'a> {
    fn new(supply: &'a [u64], demand: &'a [u64], cost: &'a Array2<f64>) -> Self {
        let (n, m) = (supply.len(), demand.len());
        FlowNetwork {
            n,
            m,
            supply,
            demand,
            cost,
            sent: vec![0; n],
            received: vec![0; m],
            flow: Array2::zeros((n, m)),
            potential: vec![0.0; n + m + 2],
        }
    }

    fn source(&self) -> usize {
        self.n + self.m
    }

    fn sink(&self) -> usize {
        self.n + self.m + 1
    }

    /// Optimal integer flow and the final node potentials.
    fn solve(mut self) -> (Array2<u64>, Vec<f64>) {
        let mut shipped = 0;
        while shipped < GRID {
            let (dist, prev) = self.shortest_paths();
            shipped += self.augment(&prev);
            let cap = dist[self.sink()];
            for (p, d) in self.potential.iter_mut().zip(&dist) {
                *p += d.min(cap);
            }
        }
        (self.flow, self.potential)
    }

    /// Dense Dijkstra over reduced costs from the source; stops once the sink
    /// is settled. Returns tentative distances and predecessor steps.
    fn shortest_paths(&self) -> (Vec<f64>, Vec<Option<(usize, Step)>>) {
        let size = self.n + self.m + 2;
        let (source, sink) = (self.source(), self.sink());
        let mut dist = vec![f64::INFINITY; size];
        let mut prev: Vec<Option<(usize, Step)>> = vec![None; size];
        let mut settled = vec![false; size];
        dist[source] = 0.0;
        let pi = &self.potential;

        loop {
            let Some(u) = (0..size)
                .filter(|&v| !settled[v] && dist[v].is_finite())
                .min_by(|&a, &b| dist[a].total_cmp(&dist[b]))
            else {
                break;
            };
            settled[u] = true;
            if u == sink {
                break;
            }
            let mut relax = |v: usize, edge_cost: f64, step: Step, dist: &mut Vec<f64>| {
                if settled[v] {
                    return;
                }
                let reduced = (edge_cost + pi[u] - pi[v]).max(0.0);
                let candidate = dist[u] + reduced;
                if candidate < dist[v] {
                    dist[v] = candidate;
                    prev[v] = Some((u, step));
                }
            };
            if u == source {
                for i in 0..self.n {
                    if self.sent[i] < self.supply[i] {
                        relax(i, 0.0, Step::SourceToRow, &mut dist);
                    }
                }
            } else if u < self.n {
                for j in 0..self.m {
                    relax(self.n + j, self.cost[[u, j]], Step::RowToCol, &mut dist);
                }
            } else {
                let j = u - self.n;
                for i in 0..self.n {
                    if self.flow[[i, j]] > 0 {
                        relax(i, -self.cost[[i, j]], Step::ColToRow, &mut dist);
                    }
                }
                if self.received[j] < self.demand[j] {
                    relax(sink, 0.0, Step::ColToSink, &mut dist);
                }
            }
        }
        (dist, prev)
    }

    /// Pushes the bottleneck amount along the predecessor path to the sink.
    fn augment(&mut self, prev: &[Option<(usize, Step)>]) -> u64 {
        let path = self.path(prev);
        let amount = path
            .iter()
            .map(|&(from, to, step)| match step {
                Step::SourceToRow => self.supply[to] - self.sent[to],
                Step::RowToCol => u64::MAX,
                Step::ColToRow => self.flow[[to, from - self.n]],
                Step::ColToSink => {
                    let j = from - self.n;
                    self.demand[j] - self.received[j]
                }
            })
            .min()
            .expect("augmenting path is non-empty");
        debug_assert!(amount > 0);
        for (from, to, step) in path {
            match step {
                Step::SourceToRow => self.sent[to] += amount,
                Step::RowToCol => self.flow[[from, to - self.n]] += amount,
                Step::ColToRow => self.flow[[to, from - self.n]] -= amount,
                Step::ColToSink => self.received[from - self.n] += amount,
            }
        }
        amount
    }

    fn path(&self, prev: &[Option<(usize, Step)>]) -> Vec<(usize, usize, Step)> {
        let mut path = Vec::new();
        let mut v = self.sink();
        while let Some((u, step)) = prev[v] {
            path.push((u, v, step));
            v = u;
        }
        assert_eq!(v, self.source(), "sink unreachable in a balanced network");
        path
    }
}

/// Exact-marginal basic solution sharing the optimal basis of the grid
/// flow, or `None` when the recomputed flows leave the feasible region.
fn polish(
    mut units: Array2<u64>,
    potential: &[f64],
    src: &[f64],
    dst: &[f64],
    cost: &Array2<f64>,
) -> Option<Array2<f64>> {
    let (n, m) = units.dim();
    // Cancel cycles in the support. Positive-flow edges all have zero reduced
    // cost, so shifting flow around a cycle keeps the grid flow optimal; the
    // cheaper direction is used to absorb floating point noise.
    while let Some(cycle) = support_cycle(&units) {
        let signed: f64 = cycle
            .iter()
            .enumerate()
            .map(|(k, &(i, j))| if k % 2 == 0 { cost[[i, j]] } else { -cost[[i, j]] })
            .sum();
        let decrease_odd = signed <= 0.0;
        let theta = cycle
            .iter()
            .enumerate()
            .filter(|(k, _)| (k % 2 == 1) == decrease_odd)
            .map(|(_, &(i, j))| units[[i, j]])
            .min()?;
        for (k, &(i, j)) in cycle.iter().enumerate() {
            if (k % 2 == 1) == decrease_odd {
                units[[i, j]] -= theta;
            } else {
                units[[i, j]] += theta;
            }
        }
    }

    let mut parent: Vec<usize> = (0..n + m).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut tree = Vec::with_capacity(n + m - 1);
    let mut candidates: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..m).map(move |j| (i, j))).collect();
    let reduced = |&(i, j): &(usize, usize)| cost[[i, j]] + potential[i] - potential[n + j];
    candidates.sort_by(|a, b| {
        (units[[b.0, b.1]] > 0)
            .cmp(&(units[[a.0, a.1]] > 0))
            .then(reduced(a).total_cmp(&reduced(b)))
    });
    for (i, j) in candidates {
        let (a, b) = (find(&mut parent, i), find(&mut parent, n + j));
        if a != b {
            parent[a] = b;
            tree.push((i, j));
        }
    }

    let (src_total, dst_total): (f64, f64) = (src.iter().sum(), dst.iter().sum());
    let mut remaining: Vec<f64> = src
        .iter()
        .map(|w| w / src_total)
        .chain(dst.iter().map(|w| w / dst_total))
        .collect();
    let mut degree = vec![0usize; n + m];
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n + m];
    for (e, &(i, j)) in tree.iter().enumerate() {
        degree[i] += 1;
        degree[n + j] += 1;
        incident[i].push(e);
        incident[n + j].push(e);
    }
    let mut done = vec![false; tree.len()];
    let mut flow = Array2::zeros((n, m));
    let mut leaves: Vec<usize> = (0..n + m).filter(|&v| degree[v] == 1).collect();
    while let Some(leaf) = leaves.pop() {
        let Some(&e) = incident[leaf].iter().find(|&&e| !done[e]) else {
            continue;
        };
        let (i, j) = tree[e];
        let other = if leaf == i { n + j } else { i };
        flow[[i, j]] = remaining[leaf];
        remaining[other] -= remaining[leaf];
        remaining[leaf] = 0.0;
        done[e] = true;
        degree[leaf] -= 1;
        degree[other] -= 1;
        if degree[other] == 1 {
            leaves.push(other);
        }
    }
    if flow.iter().any(|&f| f < -1e-12) {
        return None;
    }
    Some(flow.mapv(|f: f64| f.max(0.0)))
}

/// A cycle of positive-flow cells, alternating between row and column
/// moves, or `None` when the support is a forest.
fn support_cycle(units: &Array2<u64>) -> Option<Vec<(usize, usize)>> {
    let (n, m) = units.dim();
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n + m];
    let mut parent: Vec<usize> = (0..n + m).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for ((i, j), &u) in units.indexed_iter() {
        if u == 0 {
            continue;
        }
        let (a, b) = (find(&mut parent, i), find(&mut parent, n + j));
        if a != b {
            parent[a] = b;
            adjacency[i].push(n + j);
            adjacency[n + j].push(i);
            continue;
        }
        // (i, j) closes a cycle: walk the forest path from column j back to i
        let mut prev = vec![usize::MAX; n + m];
        prev[n + j] = n + j;
        let mut stack = vec![n + j];
        while let Some(v) = stack.pop() {
            for &w in &adjacency[v] {
                if prev[w] == usize::MAX {
                    prev[w] = v;
                    stack.push(w);
                }
            }
        }
        let mut cycle = vec![(i, j)];
        let mut v = i;
        while v != n + j {
            let w = prev[v];
            cycle.push(if v < n { (v, w - n) } else { (w, v - n) });
            v = w;
        }
        return Some(cycle);
    }
    None
}

/// Greedy feasible plan filled from the top-left cell. Its cost is an upper
/// bound on the optimum.
pub fn northwest_corner(src: &[f64], dst: &[f64]) -> Array2<f64> {
    let mut flow = Array2::zeros((src.len(), dst.len()));
    let mut supply = src.to_vec();
    let mut demand = dst.to_vec();
    let (mut i, mut j) = (0, 0);
    while i < src.len() && j < dst.len() {
        let amount = supply[i].min(demand[j]);
        flow[[i, j]] = amount;
        supply[i] -= amount;
        demand[j] -= amount;
        if supply[i] <= demand[j] && i + 1 < src.len() {
            i += 1;
        } else {
            j += 1;
        }
    }
    flow
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn single_cell() {
        let plan = solve_transport(&[1.0], &[1.0], &array![[0.0]]).unwrap();
        assert_eq!(plan.objective, 0.0);
        assert_eq!(plan.flow, array![[1.0]]);
    }

    #[test]
    fn point_masses_use_the_only_feasible_cell() {
        let cost = array![[0.0, 2.5, 1.0], [4.0, 0.0, 3.0]];
        let plan = solve_transport(&[0.0, 1.0], &[0.0, 0.0, 1.0], &cost).unwrap();
        assert_eq!(plan.objective, 3.0);
        assert_eq!(plan.flow[[1, 2]], 1.0);
    }

    #[test]
    fn two_by_two_prefers_the_cheap_diagonal() {
        let cost = array![[0.0, 1.0], [1.0, 0.0]];
        let plan = solve_transport(&[0.5, 0.5], &[0.3, 0.7], &cost).unwrap();
        // 0.3 stays on the diagonal at row 0, 0.2 must cross
        assert!((plan.objective - 0.2).abs() < 1e-12);
        assert!((plan.flow[[0, 1]] - 0.2).abs() < 1e-12);
    }

    #[test]
    fn marginals_are_respected() {
        let src = [0.2, 0.3, 0.5];
        let dst = [0.6, 0.1, 0.15, 0.15];
        let cost = array![
            [0.3, 1.2, 0.8, 2.0],
            [0.9, 0.1, 1.5, 0.4],
            [1.1, 0.7, 0.2, 0.6]
        ];
        let plan = solve_transport(&src, &dst, &cost).unwrap();
        for (got, want) in plan.row_sums().iter().zip(&src) {
            assert!((got - want).abs() < 1e-9);
        }
        for (got, want) in plan.col_sums().iter().zip(&dst) {
            assert!((got - want).abs() < 1e-9);
        }
        assert!(plan.flow.iter().all(|&t| t >= 0.0));
        assert!(plan.objective <= plan_cost(&northwest_corner(&src, &dst), &cost) + 1e-12);
    }

    #[test]
    fn rejects_bad_marginals() {
        let cost = array![[1.0]];
        assert!(matches!(
            solve_transport(&[0.9], &[1.0], &cost),
            Err(Error::InfeasibleMarginals { .. })
        ));
        assert!(matches!(
            solve_transport(&[1.0 + 5e-10], &[1.0], &cost),
            Ok(_)
        ));
        assert!(matches!(
            solve_transport(&[], &[1.0], &Array2::zeros((0, 1))),
            Err(Error::EmptyDistribution)
        ));
        assert!(solve_transport(&[1.0], &[1.0], &array![[-1.0]]).is_err());
        assert!(solve_transport(&[1.0], &[1.0], &array![[1.0, 2.0]]).is_err());
    }

    #[test]
    fn grid_rounding_is_exact() {
        let units = to_grid(&[1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]);
        assert_eq!(units.iter().sum::<u64>(), GRID);
        assert_eq!(units, vec![333_333_334, 333_333_333, 333_333_333]);
    }

    #[test]
    fn polished_plan_carries_exact_marginals() {
        let third = 1.0 / 3.0;
        let plan = solve_transport(&[third; 3], &[1.0], &array![[1.0], [2.0], [4.0]]).unwrap();
        // off the grid: exact up to floating point rounding
        for f in plan.flow.iter() {
            assert!((f - third).abs() <= 1e-15, "{f}");
        }
        assert!((plan.objective - 7.0 / 3.0).abs() <= 1e-15);
    }

    #[test]
    fn cycles_in_the_support_are_cancelled() {
        // all costs equal, so the grid flow may spread over a cycle
        let cost = array![[1.0, 1.0], [1.0, 1.0]];
        let plan = solve_transport(&[0.5, 0.5], &[0.5, 0.5], &cost).unwrap();
        assert_eq!(plan.flow.iter().filter(|&&f| f > 0.0).count() <= 3, true);
        assert_eq!(plan.objective, 1.0);
        let units = array![[2u64, 3], [4, 1]];
        let cycle = support_cycle(&units).unwrap();
        assert_eq!(cycle.len(), 4);
    }

    #[test]
    fn northwest_corner_is_feasible() {
        let flow = northwest_corner(&[0.5, 0.5], &[0.25, 0.25, 0.5]);
        assert_eq!(flow, array![[0.25, 0.25, 0.0], [0.0, 0.0, 0.5]]);
    }
}
