//! Aggregation of a link stream on `K` disjoint windows of length `Δ = T/K`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::stream::{LinkStream, NodeId, Time};

/// Zero-based window of timestamp `t`: `floor(t·K / T)`, exact.
#[inline]
pub fn window_of(t: Time, windows: u32, horizon: Time) -> u32 {
    ((t as u128 * windows as u128) / horizon as u128) as u32
}

/// Largest admissible window count for a horizon.
pub fn max_windows(horizon: Time) -> u32 {
    horizon.min(u32::MAX as u64 - 1) as u32
}

/// The series `(G_1, …, G_K)`. Only non-empty snapshots are stored.
///
/// Arcs of a snapshot are sorted by `(source, target)`, so each node's
/// neighbors form a sorted run. Undirected edges are stored in both
/// orientations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphSeries {
    node_count: u32,
    windows: u32,
    horizon: Time,
    resolution: u64,
    directed: bool,
    snap_index: Vec<u32>,
    snap_offsets: Vec<usize>,
    arcs: Vec<(NodeId, NodeId)>,
    total_edges: u64,
}

/// One snapshot `G_k`, `k` being one-based.
#[derive(Clone, Copy, Debug)]
pub struct Snapshot<'a> {
    pub index: u32,
    arcs: &'a [(NodeId, NodeId)],
    directed: bool,
}

impl<'a> Snapshot<'a> {
    pub fn arcs(&self) -> &'a [(NodeId, NodeId)] {
        self.arcs
    }

    pub fn edge_count(&self) -> usize {
        if self.directed {
            self.arcs.len()
        } else {
            self.arcs.len() / 2
        }
    }

    /// Each edge once: arcs when directed, `u < v` pairs otherwise.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + 'a {
        let directed = self.directed;
        self.arcs.iter().copied().filter(move |&(u, v)| directed || u < v)
    }

    /// Sorted out-neighbors of `u`.
    pub fn neighbors(&self, u: NodeId) -> impl Iterator<Item = NodeId> + 'a {
        let lo = self.arcs.partition_point(|a| a.0 < u);
        let hi = self.arcs.partition_point(|a| a.0 <= u);
        self.arcs[lo..hi].iter().map(|a| a.1)
    }

    /// Arcs grouped by source node.
    pub fn by_source(&self) -> impl Iterator<Item = (NodeId, &'a [(NodeId, NodeId)])> + 'a {
        self.arcs.chunk_by(|a, b| a.0 == b.0).map(|run| (run[0].0, run))
    }
}

/// Aggregates `stream` into `windows` snapshots.
pub fn aggregate(stream: &LinkStream, windows: u32) -> Result<GraphSeries> {
    let max = max_windows(stream.horizon());
    if windows == 0 || windows > max {
        return Err(Error::WindowCount {
            windows: windows as u64,
            max: max as u64,
        });
    }
    let horizon = stream.horizon();
    let directed = stream.is_directed();
    let mut snap_index = Vec::new();
    let mut snap_offsets = alloc::vec![0usize];
    let mut arcs = Vec::with_capacity(stream.event_count() * if directed { 1 } else { 2 });
    let mut total_edges = 0u64;

    let events = stream.events();
    let mut start = 0;
    while start < events.len() {
        let w = window_of(events[start].t, windows, horizon);
        let end = start + events[start..].partition_point(|e| window_of(e.t, windows, horizon) == w);
        let base = arcs.len();
        for e in &events[start..end] {
            arcs.push((e.u, e.v));
            if !directed {
                arcs.push((e.v, e.u));
            }
        }
        let run = &mut arcs[base..];
        run.sort_unstable();
        let kept = dedup_sorted(run);
        arcs.truncate(base + kept);
        total_edges += if directed { kept } else { kept / 2 } as u64;
        snap_index.push(w + 1);
        snap_offsets.push(arcs.len());
        start = end;
    }

    Ok(GraphSeries {
        node_count: stream.node_count(),
        windows,
        horizon,
        resolution: stream.resolution(),
        directed,
        snap_index,
        snap_offsets,
        arcs,
        total_edges,
    })
}

fn dedup_sorted<T: PartialEq + Copy>(xs: &mut [T]) -> usize {
    if xs.is_empty() {
        return 0;
    }
    let mut w = 1;
    for r in 1..xs.len() {
        if xs[r] != xs[w - 1] {
            xs[w] = xs[r];
            w += 1;
        }
    }
    w
}

impl GraphSeries {
    pub fn node_count(&self) -> u32 {
        self.node_count
    }

    /// `K`.
    pub fn window_count(&self) -> u32 {
        self.windows
    }

    pub fn horizon(&self) -> Time {
        self.horizon
    }

    pub fn resolution(&self) -> u64 {
        self.resolution
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// `M`, the number of edges summed over snapshots.
    pub fn total_edges(&self) -> u64 {
        self.total_edges
    }

    /// `Δ` in resolution units (may be fractional).
    pub fn delta_units(&self) -> f64 {
        self.horizon as f64 / self.windows as f64
    }

    pub fn delta_seconds(&self) -> f64 {
        (self.horizon as f64 * self.resolution as f64) / self.windows as f64
    }

    pub fn nonempty_count(&self) -> usize {
        self.snap_index.len()
    }

    fn snap_at(&self, i: usize) -> Snapshot<'_> {
        Snapshot {
            index: self.snap_index[i],
            arcs: &self.arcs[self.snap_offsets[i]..self.snap_offsets[i + 1]],
            directed: self.directed,
        }
    }

    /// Non-empty snapshots in increasing index order.
    pub fn snapshots(&self) -> impl DoubleEndedIterator<Item = Snapshot<'_>> + ExactSizeIterator {
        (0..self.snap_index.len()).map(move |i| self.snap_at(i))
    }

    /// Snapshot `k` (one-based); empty if no event fell in that window.
    pub fn snapshot(&self, k: u32) -> Snapshot<'_> {
        match self.snap_index.binary_search(&k) {
            Ok(i) => self.snap_at(i),
            Err(_) => Snapshot {
                index: k,
                arcs: &[],
                directed: self.directed,
            },
        }
    }

    /// First timestamp of window `k`: `ceil((k-1)·T/K)`.
    pub fn window_start(&self, k: u32) -> Time {
        let num = (k as u128 - 1) * self.horizon as u128;
        num.div_ceil(self.windows as u128) as Time
    }

    /// One past the last timestamp of window `k`: `ceil(k·T/K)`.
    pub fn window_end(&self, k: u32) -> Time {
        let num = k as u128 * self.horizon as u128;
        num.div_ceil(self.windows as u128) as Time
    }
}

/// Window counts to sweep, strictly decreasing (so `Δ` increasing).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaGrid {
    windows: Vec<u32>,
    horizon: Time,
    resolution: u64,
}

impl DeltaGrid {
    /// `points` log-spaced `Δ` targets from one resolution unit to the horizon.
    pub fn log_spaced(stream: &LinkStream, points: usize) -> Result<Self> {
        if points < 2 {
            return Err(Error::GridPoints(points));
        }
        let horizon = stream.horizon();
        let max = max_windows(horizon);
        let h = horizon as f64;
        let mut windows = Vec::with_capacity(points + 2);
        windows.push(max);
        windows.push(1);
        for i in 0..points {
            let target = libm::pow(h, i as f64 / (points - 1) as f64);
            let k = libm::round(h / target).clamp(1.0, max as f64) as u32;
            windows.push(k);
        }
        Ok(Self::from_sorted(windows, stream))
    }

    /// An explicit list of window counts.
    pub fn from_windows(stream: &LinkStream, windows: &[u32]) -> Result<Self> {
        let max = max_windows(stream.horizon());
        if let Some(&bad) = windows.iter().find(|&&k| k == 0 || k > max) {
            return Err(Error::WindowCount {
                windows: bad as u64,
                max: max as u64,
            });
        }
        Ok(Self::from_sorted(windows.to_vec(), stream))
    }

    fn from_sorted(mut windows: Vec<u32>, stream: &LinkStream) -> Self {
        windows.sort_unstable_by(|a, b| b.cmp(a));
        windows.dedup();
        DeltaGrid {
            windows,
            horizon: stream.horizon(),
            resolution: stream.resolution(),
        }
    }

    pub fn windows(&self) -> &[u32] {
        &self.windows
    }

    pub fn len(&self) -> usize {
        self.windows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.windows.is_empty()
    }

    pub fn delta_seconds(&self, windows: u32) -> f64 {
        (self.horizon as f64 * self.resolution as f64) / windows as f64
    }

    /// `(K, Δ in seconds)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.windows.iter().map(move |&k| (k, self.delta_seconds(k)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stream::Event;
    use alloc::vec;

    fn toy() -> LinkStream {
        // a=0, b=1, c=2
        let ev = vec![Event::new(0, 1, 0), Event::new(1, 2, 1), Event::new(0, 2, 3)];
        LinkStream::from_events(ev, 3, 4, false).unwrap()
    }

    fn edges_of(g: &GraphSeries, k: u32) -> Vec<(u32, u32)> {
        g.snapshot(k).edges().collect()
    }

    #[test]
    fn two_windows() {
        let g = aggregate(&toy(), 2).unwrap();
        assert_eq!(edges_of(&g, 1), vec![(0, 1), (1, 2)]);
        assert_eq!(edges_of(&g, 2), vec![(0, 2)]);
        assert_eq!(g.total_edges(), 3);
        assert!((g.delta_units() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn brute_force_bucketing_agrees() {
        let s = toy();
        for k in 1..=4u32 {
            let g = aggregate(&s, k).unwrap();
            for j in 1..=k {
                // (j-1)Δ <= t < jΔ  <=>  (j-1)T <= tK < jT
                let mut want: Vec<(u32, u32)> = s
                    .events()
                    .iter()
                    .filter(|e| {
                        let tk = e.t * k as u64;
                        (j as u64 - 1) * s.horizon() <= tk && tk < j as u64 * s.horizon()
                    })
                    .map(|e| (e.u, e.v))
                    .collect();
                want.sort_unstable();
                want.dedup();
                assert_eq!(edges_of(&g, j), want, "K={k} j={j}");
            }
        }
    }

    #[test]
    fn total_aggregation() {
        let g = aggregate(&toy(), 1).unwrap();
        assert_eq!(g.nonempty_count(), 1);
        assert_eq!(edges_of(&g, 1), vec![(0, 1), (0, 2), (1, 2)]);
        let nb: Vec<_> = g.snapshot(1).neighbors(0).collect();
        assert_eq!(nb, vec![1, 2]);
    }

    #[test]
    fn window_count_range() {
        assert!(aggregate(&toy(), 0).is_err());
        assert!(aggregate(&toy(), 5).is_err());
        assert!(aggregate(&toy(), 4).is_ok());
    }

    #[test]
    fn fractional_delta_windows() {
        // horizon 10, K = 3: windows [0, 3.33), [3.33, 6.67), [6.67, 10)
        let ev = vec![
            Event::new(0, 1, 3),
            Event::new(0, 1, 4),
            Event::new(0, 1, 6),
            Event::new(0, 1, 7),
        ];
        let s = LinkStream::from_events(ev, 2, 10, true).unwrap();
        let g = aggregate(&s, 3).unwrap();
        let idx: Vec<u32> = g.snapshots().map(|s| s.index).collect();
        assert_eq!(idx, vec![1, 2, 3]);
        assert_eq!(g.window_start(2), 4);
        assert_eq!(g.window_end(2), 7);
        assert_eq!(g.window_start(1), 0);
        assert_eq!(g.window_end(3), 10);
    }

    #[test]
    fn log_grid() {
        let ev = vec![Event::new(0, 1, 0), Event::new(0, 1, 99)];
        let s = LinkStream::from_events(ev, 2, 100, true).unwrap();
        let g = DeltaGrid::log_spaced(&s, 3).unwrap();
        assert_eq!(g.windows(), &[100, 10, 1]);
        let g = DeltaGrid::log_spaced(&s, 1000).unwrap();
        assert_eq!(g.len(), 100);
        assert!(DeltaGrid::log_spaced(&s, 1).is_err());
    }

    #[test]
    fn log_grid_long_horizon() {
        let ev = vec![Event::new(0, 1, 0), Event::new(0, 1, 4_229_999)];
        let s = LinkStream::from_events(ev, 2, 4_230_000, true).unwrap();
        let g = DeltaGrid::log_spaced(&s, 40).unwrap();
        assert!(g.len() <= 40);
        assert_eq!(g.windows()[0], 4_230_000);
        assert_eq!(*g.windows().last().unwrap(), 1);
        assert!(g.windows().windows(2).all(|w| w[0] > w[1]));
    }
}
