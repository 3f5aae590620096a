//! Link streams: normalized, deduplicated `(u, v, t)` events.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};

pub type NodeId = u32;
/// Timestamp in resolution units since the stream origin.
pub type Time = u64;

const SECONDS_PER_DAY: f64 = 86_400.0;

/// One punctual link. Ordered by `(t, u, v)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Event {
    pub u: NodeId,
    pub v: NodeId,
    pub t: Time,
}

impl Event {
    pub fn new(u: NodeId, v: NodeId, t: Time) -> Self {
        Event { u, v, t }
    }

    fn key(&self) -> (Time, NodeId, NodeId) {
        (self.t, self.u, self.v)
    }
}

impl Ord for Event {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// An immutable link stream over dense node ids `0..n` and the half-open
/// period `[0, horizon)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkStream {
    events: Vec<Event>,
    node_count: u32,
    t_origin: i64,
    horizon: Time,
    resolution: u64,
    directed: bool,
    labels: Vec<String>,
}

impl LinkStream {
    /// Builds a stream from events over known ids, e.g. from a generator.
    ///
    /// Events are sorted and deduplicated (orientation is canonicalized first
    /// for undirected streams). Every id in `0..node_count` must occur, no
    /// event may be a self-loop and all timestamps must be below `horizon`.
    pub fn from_events(mut events: Vec<Event>, node_count: u32, horizon: Time, directed: bool) -> Result<Self> {
        if events.is_empty() {
            return Err(Error::EmptyStream);
        }
        let mut seen = alloc::vec![false; node_count as usize];
        for e in events.iter_mut() {
            if e.u == e.v {
                return Err(Error::InvalidStream(format!("self-loop on node {}", e.u)));
            }
            if e.u >= node_count || e.v >= node_count {
                return Err(Error::InvalidStream(format!("node id out of range 0..{node_count}")));
            }
            if e.t >= horizon {
                return Err(Error::InvalidStream(format!(
                    "timestamp {} outside [0, {horizon})",
                    e.t
                )));
            }
            if !directed && e.u > e.v {
                core::mem::swap(&mut e.u, &mut e.v);
            }
            seen[e.u as usize] = true;
            seen[e.v as usize] = true;
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidStream(format!("node {missing} has no event")));
        }
        events.sort_unstable();
        events.dedup();
        let labels = (0..node_count).map(|i| i.to_string()).collect();
        Ok(LinkStream {
            events,
            node_count,
            t_origin: 0,
            horizon,
            resolution: 1,
            directed,
            labels,
        })
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn event_count(&self) -> usize {
        self.events.len()
    }

    pub fn node_count(&self) -> u32 {
        self.node_count
    }

    pub fn t_origin(&self) -> i64 {
        self.t_origin
    }

    /// Length `T` of the period of study, in resolution units.
    pub fn horizon(&self) -> Time {
        self.horizon
    }

    /// Seconds per timestamp unit.
    pub fn resolution(&self) -> u64 {
        self.resolution
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn label(&self, node: NodeId) -> &str {
        &self.labels[node as usize]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Raw clock value of a normalized timestamp.
    pub fn raw_time(&self, t: Time) -> i64 {
        self.t_origin + (t * self.resolution) as i64
    }

    /// Events with `lo <= t <= hi`.
    pub fn window(&self, lo: Time, hi: Time) -> &[Event] {
        let start = self.events.partition_point(|e| e.t < lo);
        let end = self.events.partition_point(|e| e.t <= hi);
        &self.events[start..end.max(start)]
    }

    pub fn summary(&self) -> StreamSummary {
        let n = self.node_count as f64;
        let m = self.events.len() as f64;
        let span_s = (self.horizon * self.resolution) as f64;
        StreamSummary {
            nodes: self.node_count,
            events: self.events.len() as u64,
            horizon: self.horizon,
            resolution: self.resolution,
            activity_per_day: m / (n * span_s / SECONDS_PER_DAY),
            // every event touches two nodes
            mean_inter_contact_s: n * span_s / (2.0 * m),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StreamSummary {
    pub nodes: u32,
    pub events: u64,
    pub horizon: Time,
    pub resolution: u64,
    /// Events per node per day.
    pub activity_per_day: f64,
    /// Mean time between two events involving the same node, in seconds.
    pub mean_inter_contact_s: f64,
}

/// Counters describing what normalization did to the raw input.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BuildStats {
    pub raw_events: u64,
    pub self_loops: u64,
    pub duplicates: u64,
}

/// Normalizes labelled raw triplets into a [`LinkStream`].
///
/// Node ids are assigned by first appearance in chronological order, ties
/// broken by label, so the result depends only on the set of triplets and
/// not on line order.
#[derive(Debug, Default)]
pub struct StreamBuilder {
    directed: bool,
    interned: BTreeMap<String, u32>,
    raw: Vec<(i64, u32, u32)>,
    self_loops: u64,
}

impl StreamBuilder {
    pub fn new(directed: bool) -> Self {
        StreamBuilder {
            directed,
            ..Default::default()
        }
    }

    fn intern(&mut self, label: &str) -> u32 {
        if let Some(&id) = self.interned.get(label) {
            return id;
        }
        let id = self.interned.len() as u32;
        self.interned.insert(label.to_string(), id);
        id
    }

    pub fn push(&mut self, u: &str, v: &str, t: i64) {
        if u == v {
            self.self_loops += 1;
            return;
        }
        let u = self.intern(u);
        let v = self.intern(v);
        self.raw.push((t, u, v));
    }

    pub fn self_loops(&self) -> u64 {
        self.self_loops
    }

    /// `resolution` is the number of raw clock units per timestamp unit.
    pub fn finish(self, resolution: u64) -> Result<(LinkStream, BuildStats)> {
        if resolution == 0 {
            return Err(Error::InvalidStream("resolution must be positive".into()));
        }
        if self.raw.is_empty() {
            return Err(Error::EmptyStream);
        }
        let raw_events = self.raw.len() as u64 + self.self_loops;

        // interning ids -> lexicographic rank of the label
        let mut rank = alloc::vec![0u32; self.interned.len()];
        let mut by_rank = Vec::with_capacity(self.interned.len());
        for (r, (label, id)) in self.interned.into_iter().enumerate() {
            rank[id as usize] = r as u32;
            by_rank.push(label);
        }

        let t_min = self.raw.iter().map(|r| r.0).min().unwrap_or(0);
        let t_max = self.raw.iter().map(|r| r.0).max().unwrap_or(0);
        let res = resolution as i128;
        let to_units = |t: i64| ((t as i128 - t_min as i128) / res) as Time;

        let mut ranked: Vec<(Time, u32, u32)> = self
            .raw
            .into_iter()
            .map(|(t, u, v)| {
                let (mut a, mut b) = (rank[u as usize], rank[v as usize]);
                if !self.directed && a > b {
                    core::mem::swap(&mut a, &mut b);
                }
                (to_units(t), a, b)
            })
            .collect();
        ranked.sort_unstable();

        const UNSET: u32 = u32::MAX;
        let mut id_of_rank = alloc::vec![UNSET; by_rank.len()];
        let mut labels = Vec::with_capacity(by_rank.len());
        let mut next = 0u32;
        let mut events = Vec::with_capacity(ranked.len());
        for &(t, a, b) in &ranked {
            for r in [a, b] {
                if id_of_rank[r as usize] == UNSET {
                    id_of_rank[r as usize] = next;
                    labels.push(core::mem::take(&mut by_rank[r as usize]));
                    next += 1;
                }
            }
            let (mut u, mut v) = (id_of_rank[a as usize], id_of_rank[b as usize]);
            if !self.directed && u > v {
                core::mem::swap(&mut u, &mut v);
            }
            events.push(Event { u, v, t });
        }
        events.sort_unstable();
        let before = events.len();
        events.dedup();
        let duplicates = (before - events.len()) as u64;

        let horizon = to_units(t_max) + 1;
        let stream = LinkStream {
            events,
            node_count: next,
            t_origin: t_min,
            horizon,
            resolution,
            directed: self.directed,
            labels,
        };
        let stats = BuildStats {
            raw_events,
            self_loops: self.self_loops,
            duplicates,
        };
        Ok((stream, stats))
    }
}
