//! Minimal trips of a graph series, computed one destination at a time by a
//! backward dynamic program over the snapshots.
//!
//! For a destination `v` the sweep keeps, for every source `u`, the earliest
//! arrival `EA_k(u, v)` over paths leaving `u` no earlier than snapshot `k`
//! and the fewest hops `H_k(u, v)` among paths reaching that arrival. Going
//! from `k + 1` to `k`, a source either waits, takes an edge of `G_k`
//! straight to `v`, or takes an edge of `G_k` to a relay `w` and continues
//! with `EA_{k+1}(w, v)`. The trip `(u, v, k, EA_k)` is minimal exactly when
//! `EA_k < EA_{k+1}`. Each column costs `O(M)`, so all of them cost `O(nM)`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::aggregate::GraphSeries;
use crate::error::{Error, Result};
use crate::stream::{LinkStream, NodeId, Time};

/// Sentinel for "no path".
pub const UNREACHABLE: u32 = u32::MAX;

/// A minimal trip of a graph series; snapshot indices are one-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MinimalTrip {
    pub u: NodeId,
    pub v: NodeId,
    pub t_dep: u32,
    pub t_arr: u32,
    pub hops: u32,
}

impl MinimalTrip {
    /// `t_arr - t_dep + 1` snapshots.
    pub fn duration(&self) -> u32 {
        self.t_arr - self.t_dep + 1
    }

    pub fn occupancy(&self) -> Occupancy {
        Occupancy {
            hops: self.hops,
            duration: self.duration(),
        }
    }
}

/// Occupancy rate `hops / duration`, kept as an exact pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Occupancy {
    hops: u32,
    duration: u32,
}

impl Occupancy {
    pub fn hops(&self) -> u32 {
        self.hops
    }

    pub fn duration(&self) -> u32 {
        self.duration
    }

    pub fn rate(&self) -> f64 {
        self.hops as f64 / self.duration as f64
    }

    /// Compares the rational values, not the pairs.
    pub fn cmp_rate(&self, other: &Occupancy) -> Ordering {
        (self.hops as u64 * other.duration as u64).cmp(&(other.hops as u64 * self.duration as u64))
    }
}

pub fn occupancy_rate(hops: u32, duration: u32) -> Result<Occupancy> {
    if hops == 0 || hops > duration {
        return Err(Error::Occupancy { hops, duration });
    }
    Ok(Occupancy { hops, duration })
}

/// Multiset of occupancy rates, keyed by exact `(hops, duration)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OccupancyDistribution {
    counts: BTreeMap<Occupancy, u64>,
    total: u64,
}

impl OccupancyDistribution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, occ: Occupancy) {
        self.add_n(occ, 1);
    }

    pub fn add_n(&mut self, occ: Occupancy, n: u64) {
        if n == 0 {
            return;
        }
        *self.counts.entry(occ).or_insert(0) += n;
        self.total += n;
    }

    pub fn merge(&mut self, other: &OccupancyDistribution) {
        for (&occ, &n) in &other.counts {
            self.add_n(occ, n);
        }
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = (Occupancy, u64)> + '_ {
        self.counts.iter().map(|(&o, &n)| (o, n))
    }

    /// Trips spanning a single snapshot.
    pub fn single_snapshot_trips(&self) -> u64 {
        self.counts
            .iter()
            .filter(|(o, _)| o.duration == 1)
            .map(|(_, &n)| n)
            .sum()
    }

    /// Distinct rates in increasing order with their multiplicities; pairs
    /// with equal value (e.g. 1/2 and 2/4) are merged.
    pub fn rates(&self) -> Vec<(Occupancy, u64)> {
        let mut v: Vec<(Occupancy, u64)> = self.iter().collect();
        v.sort_by(|a, b| a.0.cmp_rate(&b.0).then(a.0.cmp(&b.0)));
        let mut out: Vec<(Occupancy, u64)> = Vec::with_capacity(v.len());
        for (o, n) in v {
            match out.last_mut() {
                Some(last) if last.0.cmp_rate(&o) == Ordering::Equal => last.1 += n,
                _ => out.push((reduce(o), n)),
            }
        }
        out
    }
}

fn reduce(o: Occupancy) -> Occupancy {
    let (mut a, mut b) = (o.hops, o.duration);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    Occupancy {
        hops: o.hops / a,
        duration: o.duration / a,
    }
}

/// Sums behind the mean distances, over `(u, v, k)` triples with a finite
/// earliest arrival. Integer, so merges are order independent.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DistanceSums {
    pub finite_triples: u64,
    /// Sum of `d_time = EA_k - k + 1`.
    pub time_sum: u128,
    /// Sum of `d_hops = H_k`.
    pub hops_sum: u128,
    /// Number of destination columns swept.
    pub columns: u64,
}

impl DistanceSums {
    pub fn merge(&mut self, other: &DistanceSums) {
        self.finite_triples += other.finite_triples;
        self.time_sum += other.time_sum;
        self.hops_sum += other.hops_sum;
        self.columns += other.columns;
    }

    /// Adds departures `lo..=hi` all sharing arrival `ea` and `hops`.
    fn add_segment(&mut self, lo: u32, hi: u32, ea: u32, hops: u32) {
        let count = (hi - lo + 1) as u128;
        let dep_sum = (lo as u128 + hi as u128) * count / 2;
        self.finite_triples += count as u64;
        self.time_sum += count * (ea as u128 + 1) - dep_sum;
        self.hops_sum += count * hops as u128;
    }
}

/// Per-destination state of the backward sweep, reusable across columns.
#[derive(Clone, Debug)]
pub struct ArrivalColumn {
    dest: NodeId,
    earliest: Vec<u32>,
    hops: Vec<u32>,
    // snapshot at which the current (earliest, hops) value was set
    set_at: Vec<u32>,
    pending: Vec<(NodeId, u32, u32)>,
}

impl ArrivalColumn {
    pub fn new(node_count: u32) -> Self {
        let n = node_count as usize;
        ArrivalColumn {
            dest: 0,
            earliest: alloc::vec![UNREACHABLE; n],
            hops: alloc::vec![UNREACHABLE; n],
            set_at: alloc::vec![0; n],
            pending: Vec::new(),
        }
    }

    /// Sweeps destination `dest` from `K` down to 1, reporting each minimal
    /// trip to `on_trip` as soon as its departure snapshot is processed.
    pub fn sweep<F: FnMut(MinimalTrip)>(&mut self, series: &GraphSeries, dest: NodeId, mut on_trip: F) -> DistanceSums {
        self.dest = dest;
        self.earliest.fill(UNREACHABLE);
        self.hops.fill(UNREACHABLE);
        let mut sums = DistanceSums {
            columns: 1,
            ..Default::default()
        };

        for snap in series.snapshots().rev() {
            let k = snap.index;
            self.pending.clear();
            for (x, run) in snap.by_source() {
                if x == dest {
                    continue;
                }
                let mut best = (UNREACHABLE, UNREACHABLE);
                for &(_, w) in run {
                    let cand = if w == dest {
                        (k, 1)
                    } else {
                        let e = self.earliest[w as usize];
                        if e == UNREACHABLE {
                            continue;
                        }
                        (e, self.hops[w as usize] + 1)
                    };
                    if cand < best {
                        best = cand;
                    }
                }
                let xi = x as usize;
                if best < (self.earliest[xi], self.hops[xi]) {
                    self.pending.push((x, best.0, best.1));
                }
            }
            for &(x, ea, h) in &self.pending {
                let xi = x as usize;
                let old = self.earliest[xi];
                if old != UNREACHABLE {
                    sums.add_segment(k + 1, self.set_at[xi], old, self.hops[xi]);
                }
                self.earliest[xi] = ea;
                self.hops[xi] = h;
                self.set_at[xi] = k;
                if ea < old {
                    on_trip(MinimalTrip {
                        u: x,
                        v: dest,
                        t_dep: k,
                        t_arr: ea,
                        hops: h,
                    });
                }
            }
        }

        for x in 0..self.earliest.len() {
            let ea = self.earliest[x];
            if ea != UNREACHABLE {
                sums.add_segment(1, self.set_at[x], ea, self.hops[x]);
            }
        }
        sums
    }

    pub fn dest(&self) -> NodeId {
        self.dest
    }

    /// `EA_1(u, dest)` after a sweep.
    pub fn earliest(&self, u: NodeId) -> Option<u32> {
        let e = self.earliest[u as usize];
        (e != UNREACHABLE).then_some(e)
    }

    /// `H_1(u, dest)` after a sweep.
    pub fn hops(&self, u: NodeId) -> Option<u32> {
        let h = self.hops[u as usize];
        (h != UNREACHABLE).then_some(h)
    }
}

/// Occupancy distribution and distance sums of one series.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SweepOutput {
    pub distribution: OccupancyDistribution,
    pub distances: DistanceSums,
}

impl SweepOutput {
    pub fn merge(&mut self, other: &SweepOutput) {
        self.distribution.merge(&other.distribution);
        self.distances.merge(&other.distances);
    }
}

/// Runs every destination column (or only `sinks`) sequentially.
pub fn minimal_trip_sweep(series: &GraphSeries, sinks: Option<&[NodeId]>) -> SweepOutput {
    let mut column = ArrivalColumn::new(series.node_count());
    let mut out = SweepOutput::default();
    let mut run = |v: NodeId, out: &mut SweepOutput| {
        let dist = &mut out.distribution;
        let sums = column.sweep(series, v, |trip| dist.add(trip.occupancy()));
        out.distances.merge(&sums);
    };
    match sinks {
        Some(sinks) => sinks.iter().for_each(|&v| run(v, &mut out)),
        None => (0..series.node_count()).for_each(|v| run(v, &mut out)),
    }
    out
}

/// Workspace for fastest-path queries on the raw stream.
#[derive(Clone, Debug)]
pub struct StreamQuery {
    earliest: Vec<Time>,
    touched: Vec<NodeId>,
    pending: Vec<(NodeId, Time)>,
}

impl StreamQuery {
    pub fn new(node_count: u32) -> Self {
        StreamQuery {
            earliest: alloc::vec![Time::MAX; node_count as usize],
            touched: Vec::new(),
            pending: Vec::new(),
        }
    }

    /// Fastest temporal path from `source` to `dest` using only events with
    /// `lo <= t <= hi`; returns `(departure, arrival)` of a minimal trip of
    /// least duration.
    pub fn fastest(
        &mut self,
        stream: &LinkStream,
        source: NodeId,
        dest: NodeId,
        lo: Time,
        hi: Time,
    ) -> Option<(Time, Time)> {
        let directed = stream.is_directed();
        let events = stream.window(lo, hi);
        let mut best: Option<(Time, Time)> = None;
        let mut end = events.len();
        while end > 0 {
            let t = events[end - 1].t;
            let start = events[..end].partition_point(|e| e.t < t);
            self.pending.clear();
            for e in &events[start..end] {
                self.offer(e.u, e.v, t, dest);
                if !directed {
                    self.offer(e.v, e.u, t, dest);
                }
            }
            let mut from_source = Time::MAX;
            for &(a, arr) in &self.pending {
                let ai = a as usize;
                if a == source {
                    from_source = from_source.min(arr);
                }
                if arr < self.earliest[ai] {
                    if self.earliest[ai] == Time::MAX {
                        self.touched.push(a);
                    }
                    self.earliest[ai] = arr;
                }
            }
            if from_source != Time::MAX {
                let better = match best {
                    None => true,
                    Some((d, a)) => from_source - t < a - d,
                };
                if better {
                    best = Some((t, from_source));
                }
            }
            end = start;
        }
        for &x in &self.touched {
            self.earliest[x as usize] = Time::MAX;
        }
        self.touched.clear();
        best
    }

    fn offer(&mut self, a: NodeId, b: NodeId, t: Time, dest: NodeId) {
        if a == dest {
            return;
        }
        let arr = if b == dest {
            t
        } else {
            match self.earliest[b as usize] {
                Time::MAX => return,
                e => e,
            }
        };
        self.pending.push((a, arr));
    }
}

/// Least duration of a temporal path from `u` to `v` inside `[lo, hi]`.
pub fn stream_earliest_arrival(stream: &LinkStream, u: NodeId, lo: Time, hi: Time, v: NodeId) -> Option<(Time, Time)> {
    StreamQuery::new(stream.node_count()).fastest(stream, u, v, lo, hi)
}
