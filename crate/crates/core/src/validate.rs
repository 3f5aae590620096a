//! How much a given aggregation loses: shortest transitions that collapse into
//! one window, and how much longer minimal trips of the series are than the
//! fastest stream paths inside the same absolute window.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::aggregate::{window_of, GraphSeries};
use crate::reach::{minimal_trip_sweep, ArrivalColumn, MinimalTrip, StreamQuery};
use crate::stream::{LinkStream, NodeId, Time};

/// Two-hop path `(a, b, t1), (b, c, t2)` such that `(a, c, t1, t2)` is a
/// minimal trip of the stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ShortestTransition {
    pub t1: Time,
    pub t2: Time,
    pub a: NodeId,
    pub b: NodeId,
    pub c: NodeId,
}

/// Backward scan of the stream towards one destination `c`.
///
/// At a timestamp group `t1` the scan knows, for every node, the earliest
/// arrival at `c` leaving strictly after `t1` and the next direct event to
/// `c`. A candidate `(a, b, t1), (b, c, t2)` only ever uses the first
/// `(b, c)` event after `t1`; it is shortest when nothing leaving `a` at or
/// after `t1` arrives before `t2`, and nothing leaving after `t1` arrives by
/// `t2`.
#[derive(Clone, Debug)]
pub struct TransitionColumn {
    earliest: Vec<Time>,
    direct: Vec<Time>,
    pending: Vec<(NodeId, Time)>,
    // (a, b, t2, earliest arrival of a before this group)
    candidates: Vec<(NodeId, NodeId, Time, Time)>,
}

impl TransitionColumn {
    pub fn new(node_count: u32) -> Self {
        TransitionColumn {
            earliest: alloc::vec![Time::MAX; node_count as usize],
            direct: alloc::vec![Time::MAX; node_count as usize],
            pending: Vec::new(),
            candidates: Vec::new(),
        }
    }

    pub fn scan(&mut self, stream: &LinkStream, dest: NodeId, out: &mut Vec<ShortestTransition>) {
        self.earliest.fill(Time::MAX);
        self.direct.fill(Time::MAX);
        let events = stream.events();
        let directed = stream.is_directed();
        let mut end = events.len();
        while end > 0 {
            let t = events[end - 1].t;
            let start = events[..end].partition_point(|e| e.t < t);
            let group = &events[start..end];
            self.pending.clear();
            self.candidates.clear();
            for e in group {
                self.offer(e.u, e.v, t, dest);
                if !directed {
                    self.offer(e.v, e.u, t, dest);
                }
            }
            for &(a, arr) in &self.pending {
                let e = &mut self.earliest[a as usize];
                *e = (*e).min(arr);
            }
            for &(a, b, t2, before) in &self.candidates {
                if self.earliest[a as usize] == t2 && before > t2 {
                    out.push(ShortestTransition {
                        t1: t,
                        t2,
                        a,
                        b,
                        c: dest,
                    });
                }
            }
            for e in group {
                if e.v == dest {
                    self.direct[e.u as usize] = t;
                } else if !directed && e.u == dest {
                    self.direct[e.v as usize] = t;
                }
            }
            end = start;
        }
    }

    fn offer(&mut self, a: NodeId, b: NodeId, t: Time, dest: NodeId) {
        if a == dest {
            return;
        }
        if b == dest {
            self.pending.push((a, t));
            return;
        }
        let via = self.earliest[b as usize];
        if via != Time::MAX {
            self.pending.push((a, via));
        }
        let t2 = self.direct[b as usize];
        if t2 != Time::MAX {
            self.candidates.push((a, b, t2, self.earliest[a as usize]));
        }
    }
}

/// All shortest transitions, sorted by `(t1, t2, a, b, c)`.
pub fn enumerate_shortest_transitions(stream: &LinkStream) -> Vec<ShortestTransition> {
    let mut col = TransitionColumn::new(stream.node_count());
    let mut out = Vec::new();
    for c in 0..stream.node_count() {
        col.scan(stream, c, &mut out);
    }
    out.sort_unstable();
    out
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LossCount {
    pub total: u64,
    pub lost: u64,
}

impl LossCount {
    /// `None` when the stream has no shortest transition at all.
    pub fn fraction(&self) -> Option<f64> {
        (self.total > 0).then(|| self.lost as f64 / self.total as f64)
    }
}

/// Shortest transitions whose two events share a window when aggregating
/// with `windows` windows.
pub fn lost_fraction(transitions: &[ShortestTransition], horizon: Time, windows: u32) -> LossCount {
    let lost = transitions
        .iter()
        .filter(|tr| window_of(tr.t1, windows, horizon) == window_of(tr.t2, windows, horizon))
        .count();
    LossCount {
        total: transitions.len() as u64,
        lost: lost as u64,
    }
}

/// Elongation factor of one series trip, as the exact ratio
/// `duration · T / (K · time_L)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ElongationSample {
    pub trip: MinimalTrip,
    pub num: u128,
    pub den: u128,
}

impl ElongationSample {
    pub fn factor(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

/// How trips are picked for the elongation mean.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ElongationSampling {
    /// Use every eligible trip below this count.
    pub full_below: u64,
    /// Expected sample size otherwise.
    pub sample_size: u64,
    pub seed: u64,
}

impl Default for ElongationSampling {
    fn default() -> Self {
        ElongationSampling {
            full_below: 1_000_000,
            sample_size: 100_000,
            seed: 0,
        }
    }
}

impl ElongationSampling {
    /// Bernoulli keep probability given the number of eligible trips.
    pub fn keep_probability(&self, eligible: u64) -> Option<f64> {
        (eligible >= self.full_below && eligible > 0).then(|| (self.sample_size as f64 / eligible as f64).min(1.0))
    }
}

/// Computes elongation factors for the multi-snapshot minimal trips of one
/// destination column.
#[derive(Clone, Debug)]
pub struct ElongationColumn {
    arrivals: ArrivalColumn,
    query: StreamQuery,
}

impl ElongationColumn {
    pub fn new(node_count: u32) -> Self {
        ElongationColumn {
            arrivals: ArrivalColumn::new(node_count),
            query: StreamQuery::new(node_count),
        }
    }

    /// With `keep = Some(p)` each trip is kept with probability `p`, drawn
    /// from a generator seeded by `(seed, dest)` so the choice does not depend
    /// on column scheduling.
    pub fn run(
        &mut self,
        stream: &LinkStream,
        series: &GraphSeries,
        dest: NodeId,
        keep: Option<f64>,
        seed: u64,
        out: &mut Vec<ElongationSample>,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(dest as u64);
        let query = &mut self.query;
        self.arrivals.sweep(series, dest, |trip| {
            if trip.t_dep == trip.t_arr {
                return;
            }
            if let Some(p) = keep {
                if rng.random::<f64>() >= p {
                    return;
                }
            }
            out.push(elongation(stream, series, trip, query));
        });
    }
}

/// Elongation of a series trip with `t_dep < t_arr`.
pub fn elongation(
    stream: &LinkStream,
    series: &GraphSeries,
    trip: MinimalTrip,
    query: &mut StreamQuery,
) -> ElongationSample {
    let lo = series.window_start(trip.t_dep);
    let hi = series.window_end(trip.t_arr) - 1;
    let (dep, arr) = query
        .fastest(stream, trip.u, trip.v, lo, hi)
        .expect("a series trip is realized by stream events of its windows");
    let time_l = arr - dep;
    assert!(time_l > 0, "multi-snapshot minimal trip realized by a single link");
    let num = trip.duration() as u128 * series.horizon() as u128;
    let den = series.window_count() as u128 * time_l as u128;
    assert!(num >= den, "elongation factor below 1");
    ElongationSample { trip, num, den }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ElongationSummary {
    /// Minimal trips of the series spanning more than one snapshot.
    pub eligible: u64,
    pub samples: u64,
    pub subsampled: bool,
    pub mean: Option<f64>,
}

/// Mean of the factors, summed in sorted order so the result does not
/// depend on how samples were gathered.
pub fn summarize_elongation(samples: &mut [ElongationSample], eligible: u64, subsampled: bool) -> ElongationSummary {
    samples.sort_unstable();
    let sum: f64 = samples.iter().map(ElongationSample::factor).sum();
    ElongationSummary {
        eligible,
        samples: samples.len() as u64,
        subsampled,
        mean: (!samples.is_empty()).then(|| sum / samples.len() as f64),
    }
}

/// Sequential mean elongation of the minimal trips of `series`.
pub fn mean_elongation(stream: &LinkStream, series: &GraphSeries, sampling: &ElongationSampling) -> ElongationSummary {
    let dist = minimal_trip_sweep(series, None).distribution;
    let eligible = dist.total() - dist.single_snapshot_trips();
    let keep = sampling.keep_probability(eligible);
    let mut col = ElongationColumn::new(series.node_count());
    let mut samples = Vec::new();
    for v in 0..series.node_count() {
        col.run(stream, series, v, keep, sampling.seed, &mut samples);
    }
    summarize_elongation(&mut samples, eligible, keep.is_some())
}
