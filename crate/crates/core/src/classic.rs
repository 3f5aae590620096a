//! Classical statistics of a graph series: density, connectivity and mean
//! temporal distances.

use alloc::vec::Vec;

use crate::aggregate::GraphSeries;
use crate::reach::DistanceSums;
use crate::stream::NodeId;

/// Union-find over `0..n` that can be reset in time proportional to the
/// number of nodes touched since the last reset.
#[derive(Clone, Debug)]
pub struct DisjointSets {
    parent: Vec<NodeId>,
    size: Vec<u32>,
    touched: Vec<NodeId>,
    active: Vec<bool>,
}

impl DisjointSets {
    pub fn new(n: u32) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            size: alloc::vec![1; n as usize],
            touched: Vec::new(),
            active: alloc::vec![false; n as usize],
        }
    }

    fn touch(&mut self, x: NodeId) {
        if !self.active[x as usize] {
            self.active[x as usize] = true;
            self.touched.push(x);
        }
    }

    pub fn find(&mut self, mut x: NodeId) -> NodeId {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    pub fn union(&mut self, a: NodeId, b: NodeId) {
        self.touch(a);
        self.touch(b);
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            core::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
    }

    /// Nodes touched since the last reset.
    pub fn touched(&self) -> usize {
        self.touched.len()
    }

    pub fn largest(&mut self) -> u32 {
        let mut best = 1;
        for i in 0..self.touched.len() {
            let r = self.find(self.touched[i]);
            best = best.max(self.size[r as usize]);
        }
        best
    }

    pub fn reset(&mut self) {
        for &x in &self.touched {
            self.parent[x as usize] = x;
            self.size[x as usize] = 1;
            self.active[x as usize] = false;
        }
        self.touched.clear();
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SnapshotStats {
    pub mean_density: f64,
    pub mean_degree: f64,
    pub mean_largest_cc: f64,
    pub mean_non_isolated: f64,
}

/// Means over all `K` snapshots, empty ones included. Components of directed
/// snapshots are weakly connected components.
pub fn snapshot_stats(series: &GraphSeries) -> SnapshotStats {
    let n = series.node_count() as u64;
    let k = series.window_count() as f64;
    let pairs = if series.is_directed() {
        n * n.saturating_sub(1)
    } else {
        n * n.saturating_sub(1) / 2
    };
    let mut sets = DisjointSets::new(series.node_count());
    let mut edges = 0u64;
    let mut largest = 0u64;
    let mut non_isolated = 0u64;
    for snap in series.snapshots() {
        edges += snap.edge_count() as u64;
        for (u, v) in snap.edges() {
            sets.union(u, v);
        }
        largest += sets.largest() as u64;
        non_isolated += sets.touched() as u64;
        sets.reset();
    }
    let empty = series.window_count() as u64 - series.nonempty_count() as u64;
    largest += empty;

    let mean_edges = edges as f64 / k;
    SnapshotStats {
        mean_density: if pairs == 0 { 0.0 } else { mean_edges / pairs as f64 },
        mean_degree: if series.is_directed() {
            mean_edges / n as f64
        } else {
            2.0 * mean_edges / n as f64
        },
        mean_largest_cc: largest as f64 / k,
        mean_non_isolated: non_isolated as f64 / k,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DistanceStats {
    /// Mean `d_time` in snapshots; `None` when no pair is ever connected.
    pub mean_d_time: Option<f64>,
    pub mean_d_hops: Option<f64>,
    /// `Δ · mean_d_time`, in seconds.
    pub mean_d_time_abs: Option<f64>,
    /// Share of `(u, v, k)` triples, `u ≠ v`, with a finite distance.
    pub finite_pair_fraction: f64,
}

/// Means of the distances accumulated by a reachability sweep over `series`.
pub fn distance_stats(series: &GraphSeries, sums: &DistanceSums) -> DistanceStats {
    let n = series.node_count() as f64;
    let triples = series.window_count() as f64 * sums.columns as f64 * (n - 1.0);
    let finite = sums.finite_triples as f64;
    let (time, hops) = if sums.finite_triples == 0 {
        (None, None)
    } else {
        (Some(sums.time_sum as f64 / finite), Some(sums.hops_sum as f64 / finite))
    };
    DistanceStats {
        mean_d_time: time,
        mean_d_hops: hops,
        mean_d_time_abs: time.map(|t| t * series.delta_seconds()),
        finite_pair_fraction: if triples > 0.0 { finite / triples } else { 0.0 },
    }
}

/// Snapshot and distance statistics of one grid point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassicStats {
    pub snapshots: SnapshotStats,
    pub distances: DistanceStats,
}

impl ClassicStats {
    pub fn new(series: &GraphSeries, sums: &DistanceSums) -> Self {
        ClassicStats {
            snapshots: snapshot_stats(series),
            distances: distance_stats(series, sums),
        }
    }
}
