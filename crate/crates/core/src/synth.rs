//! Seeded synthetic link streams: time-uniform and two-mode activity.
//!
//! Randomness comes from ChaCha8 seeded with the spec seed; pairs are
//! visited in lexicographic order, so a seed fully determines the stream.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::stream::{Event, LinkStream, NodeId, Time};

/// `links_per_pair` uniform timestamps in `[0, horizon)` for every pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UniformSpec {
    pub nodes: u32,
    pub links_per_pair: u64,
    pub horizon: Time,
    pub seed: u64,
    pub directed: bool,
}

impl UniformSpec {
    /// Mean time between two events of the same node, `T / (N (n - 1))`.
    pub fn mean_inter_contact(&self) -> f64 {
        self.horizon as f64 / (self.links_per_pair as f64 * (self.nodes as f64 - 1.0))
    }

    /// False when links are not sparse in time (`N > T/10`).
    pub fn is_sparse(&self) -> bool {
        self.links_per_pair * 10 <= self.horizon
    }

    fn check(&self) -> Result<()> {
        if self.nodes < 2 {
            return Err(Error::GeneratorSpec(format!(
                "need at least 2 nodes, got {}",
                self.nodes
            )));
        }
        if self.links_per_pair == 0 || self.horizon == 0 {
            return Err(Error::GeneratorSpec(
                "links per pair and horizon must be positive".into(),
            ));
        }
        check_fits(self.links_per_pair, self.horizon)
    }
}

/// `alternations` repetitions of a high-activity segment (`high_links` per
/// pair over `high_len`) followed by a low-activity one (`low_links` over
/// `low_len`). A segment of length zero carries no links.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TwoModeSpec {
    pub nodes: u32,
    pub high_links: u64,
    pub high_len: Time,
    pub low_links: u64,
    pub low_len: Time,
    pub alternations: u32,
    pub seed: u64,
    pub directed: bool,
}

impl TwoModeSpec {
    pub fn horizon(&self) -> Time {
        self.alternations as Time * (self.high_len + self.low_len)
    }

    /// Share of time spent in low activity, `T2 / (T1 + T2)`.
    pub fn low_share(&self) -> f64 {
        self.low_len as f64 / (self.high_len + self.low_len) as f64
    }

    fn links(&self, len: Time, links: u64) -> u64 {
        if len == 0 {
            0
        } else {
            links
        }
    }

    pub fn expected_events(&self) -> u64 {
        let pairs = pair_count(self.nodes, self.directed);
        self.alternations as u64
            * pairs
            * (self.links(self.high_len, self.high_links) + self.links(self.low_len, self.low_links))
    }

    fn check(&self) -> Result<()> {
        if self.nodes < 2 {
            return Err(Error::GeneratorSpec(format!(
                "need at least 2 nodes, got {}",
                self.nodes
            )));
        }
        if self.alternations == 0 || self.high_len + self.low_len == 0 {
            return Err(Error::GeneratorSpec("empty period of study".into()));
        }
        if self.links(self.high_len, self.high_links) + self.links(self.low_len, self.low_links) == 0 {
            return Err(Error::GeneratorSpec("no links in either mode".into()));
        }
        check_fits(self.high_links, self.high_len)?;
        check_fits(self.low_links, self.low_len)
    }
}

fn check_fits(links: u64, len: Time) -> Result<()> {
    if len > 0 && links > len {
        return Err(Error::GeneratorSpec(format!(
            "{links} distinct timestamps per pair do not fit in {len} units"
        )));
    }
    Ok(())
}

fn pair_count(nodes: u32, directed: bool) -> u64 {
    let n = nodes as u64;
    if directed {
        n * (n - 1)
    } else {
        n * (n - 1) / 2
    }
}

fn pairs(nodes: u32, directed: bool) -> impl Iterator<Item = (NodeId, NodeId)> {
    (0..nodes).flat_map(move |u| (0..nodes).filter_map(move |v| (v != u && (directed || u < v)).then_some((u, v))))
}

/// Appends `links` distinct uniform timestamps in `[offset, offset + len)`
/// for the pair; collisions are redrawn.
fn fill_pair(
    rng: &mut ChaCha8Rng,
    used: &mut BTreeSet<Time>,
    out: &mut Vec<Event>,
    (u, v): (NodeId, NodeId),
    links: u64,
    offset: Time,
    len: Time,
) {
    used.clear();
    while (used.len() as u64) < links {
        let t = offset + rng.random_range(0..len);
        if used.insert(t) {
            out.push(Event::new(u, v, t));
        }
    }
}

pub fn gen_uniform(spec: &UniformSpec) -> Result<LinkStream> {
    spec.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut used = BTreeSet::new();
    let mut events = Vec::with_capacity((pair_count(spec.nodes, spec.directed) * spec.links_per_pair) as usize);
    for pair in pairs(spec.nodes, spec.directed) {
        fill_pair(
            &mut rng,
            &mut used,
            &mut events,
            pair,
            spec.links_per_pair,
            0,
            spec.horizon,
        );
    }
    LinkStream::from_events(events, spec.nodes, spec.horizon, spec.directed)
}

pub fn gen_two_mode(spec: &TwoModeSpec) -> Result<LinkStream> {
    spec.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut used = BTreeSet::new();
    let mut events = Vec::with_capacity(spec.expected_events() as usize);
    let mut offset = 0;
    for _ in 0..spec.alternations {
        for (len, links) in [(spec.high_len, spec.high_links), (spec.low_len, spec.low_links)] {
            if len > 0 && links > 0 {
                for pair in pairs(spec.nodes, spec.directed) {
                    fill_pair(&mut rng, &mut used, &mut events, pair, links, offset, len);
                }
            }
            offset += len;
        }
    }
    LinkStream::from_events(events, spec.nodes, spec.horizon(), spec.directed)
}
