#![allow(dead_code)]

use std::collections::BTreeMap;

use linkscale_core::{occupancy_rate, Event, LinkStream, OccupancyDistribution, ShortestTransition, Survival};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random stream over exactly `n` nodes (every node gets an event).
pub fn random_stream(rng: &mut ChaCha8Rng, n: u32, events: usize, horizon: u64, directed: bool) -> LinkStream {
    let mut ev = Vec::new();
    // a chain first so every node occurs
    for u in 1..n {
        ev.push(Event::new(u - 1, u, rng.random_range(0..horizon)));
    }
    while ev.len() < events.max(n as usize - 1) {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u != v {
            ev.push(Event::new(u, v, rng.random_range(0..horizon)));
        }
    }
    LinkStream::from_events(ev, n, horizon, directed).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Arcs per one-based snapshot, bucketed by exact rational comparison
/// `(k - 1) T <= t K < k T`.
pub fn naive_snapshots(s: &LinkStream, k: u32) -> Vec<Vec<(u32, u32)>> {
    let horizon = s.horizon() as u128;
    let mut snaps = vec![Vec::new(); k as usize + 1];
    for e in s.events() {
        let tk = e.t as u128 * k as u128;
        let j = (1..=k).find(|&j| tk < j as u128 * horizon).unwrap();
        snaps[j as usize].push((e.u, e.v));
        if !s.is_directed() {
            snaps[j as usize].push((e.v, e.u));
        }
    }
    for sn in snaps.iter_mut() {
        sn.sort_unstable();
        sn.dedup();
    }
    snaps
}

/// Every temporal walk of a graph series, as `(u, v, first, last, hops)`.
pub fn all_walks(snaps: &[Vec<(u32, u32)>]) -> Vec<(u32, u32, u32, u32, u32)> {
    fn extend(
        snaps: &[Vec<(u32, u32)>],
        start: (u32, u32),
        at: u32,
        last: u32,
        hops: u32,
        out: &mut Vec<(u32, u32, u32, u32, u32)>,
    ) {
        out.push((start.0, at, start.1, last, hops));
        for k in last as usize + 1..snaps.len() {
            for &(x, y) in &snaps[k] {
                if x == at {
                    extend(snaps, start, y, k as u32, hops + 1, out);
                }
            }
        }
    }
    let mut out = Vec::new();
    for k in 1..snaps.len() {
        for &(x, y) in &snaps[k] {
            extend(snaps, (x, k as u32), y, k as u32, 1, &mut out);
        }
    }
    out
}

/// Minimal trips `(u, v, dep, arr, hops)` of a series by exhaustive walk
/// enumeration and interval filtering.
pub fn brute_minimal_trips(snaps: &[Vec<(u32, u32)>]) -> Vec<(u32, u32, u32, u32, u32)> {
    let mut trips: BTreeMap<(u32, u32, u32, u32), u32> = BTreeMap::new();
    for (u, v, a, b, h) in all_walks(snaps) {
        if u == v {
            continue;
        }
        let e = trips.entry((u, v, a, b)).or_insert(h);
        *e = (*e).min(h);
    }
    let mut out = Vec::new();
    for (&(u, v, a, b), &h) in &trips {
        let contains_smaller = trips
            .keys()
            .any(|&(x, y, c, d)| x == u && y == v && a <= c && d <= b && (c, d) != (a, b));
        if !contains_smaller {
            out.push((u, v, a, b, h));
        }
    }
    out
}

/// `(finite, sum d_time, sum d_hops)` over `(u, v, k)`, `u != v`.
pub fn brute_distance_sums(snaps: &[Vec<(u32, u32)>], n: u32) -> (u64, u128, u128) {
    let walks = all_walks(snaps);
    let k_max = snaps.len() as u32 - 1;
    let (mut finite, mut time, mut hops) = (0u64, 0u128, 0u128);
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            for k in 1..=k_max {
                let best = walks
                    .iter()
                    .filter(|w| w.0 == u && w.1 == v && w.2 >= k)
                    .map(|w| (w.3, w.4))
                    .min();
                if let Some((arr, h)) = best {
                    finite += 1;
                    time += (arr - k + 1) as u128;
                    hops += h as u128;
                }
            }
        }
    }
    (finite, time, hops)
}

/// Whether the stream holds a temporal path from `a` to `c` with all
/// events in `[lo, hi]`.
pub fn stream_reaches(s: &LinkStream, a: u32, c: u32, lo: u64, hi: u64) -> bool {
    if lo > hi {
        return false;
    }
    // reached[x] = earliest time x is reached
    let mut reached: BTreeMap<u32, u64> = BTreeMap::new();
    let mut t = lo;
    loop {
        let mut fresh = Vec::new();
        for e in s.events().iter().filter(|e| e.t == t) {
            let mut arcs = vec![(e.u, e.v)];
            if !s.is_directed() {
                arcs.push((e.v, e.u));
            }
            for (p, q) in arcs {
                let from_p = p == a || reached.get(&p).is_some_and(|&r| r < t);
                if from_p {
                    fresh.push(q);
                }
            }
        }
        for q in fresh {
            reached.entry(q).or_insert(t);
        }
        if reached.contains_key(&c) {
            return true;
        }
        if t == hi {
            return false;
        }
        t += 1;
    }
}

/// Whether `(a, c, t1, t2)` is a minimal trip of the stream.
pub fn stream_trip_is_minimal(s: &LinkStream, a: u32, c: u32, t1: u64, t2: u64) -> bool {
    let inner_right = t2 > t1 && stream_reaches(s, a, c, t1, t2 - 1);
    let inner_left = t1 < t2 && stream_reaches(s, a, c, t1 + 1, t2);
    stream_reaches(s, a, c, t1, t2) && !inner_left && !inner_right
}

/// Least `arr - dep` over stream paths `a -> c` inside `[lo, hi]`.
pub fn brute_fastest(s: &LinkStream, a: u32, c: u32, lo: u64, hi: u64) -> Option<u64> {
    let times: Vec<u64> = s.window(lo, hi).iter().map(|e| e.t).collect();
    let mut best = None;
    for &x in &times {
        for &y in &times {
            if x <= y && stream_reaches(s, a, c, x, y) {
                best = Some(best.map_or(y - x, |b: u64| b.min(y - x)));
            }
        }
    }
    best
}

/// Shortest transitions by pairing every two arcs.
pub fn brute_transitions(s: &LinkStream) -> Vec<ShortestTransition> {
    let mut arcs = Vec::new();
    for e in s.events() {
        arcs.push((e.u, e.v, e.t));
        if !s.is_directed() {
            arcs.push((e.v, e.u, e.t));
        }
    }
    let mut out = Vec::new();
    for &(a, b, t1) in &arcs {
        for &(b2, c, t2) in &arcs {
            if b2 == b && t2 > t1 && a != c && stream_trip_is_minimal(s, a, c, t1, t2) {
                out.push(ShortestTransition { t1, t2, a, b, c });
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

// five-point Gauss-Legendre on [a, b]; only interior nodes are evaluated,
// so a jump at either end does not leak into the piece
pub fn gauss(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    const NODES: [(f64, f64); 5] = [
        (0.0, 0.568_888_888_888_888_9),
        (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
        (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
        (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
        (0.906_179_845_938_664, 0.236_926_885_056_189_1),
    ];
    let (m, h) = (0.5 * (a + b), 0.5 * (b - a));
    NODES.iter().map(|&(x, w)| w * f(m + h * x)).sum::<f64>() * h
}

pub fn adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let left = gauss(f, a, m);
    let right = gauss(f, m, b);
    // a few forced levels keep a kink from hiding between the nodes
    if depth == 0 || (depth < 42 && (left + right - whole).abs() <= tol) {
        return left + right;
    }
    adaptive(f, a, m, left, tol / 2.0, depth - 1) + adaptive(f, m, b, right, tol / 2.0, depth - 1)
}

/// `∫ f` over `[0, 1]`, split at the given breakpoints.
pub fn integrate(f: &dyn Fn(f64) -> f64, cuts: &[f64]) -> f64 {
    let mut xs = vec![0.0];
    xs.extend(cuts.iter().copied().filter(|&c| c > 0.0 && c < 1.0));
    xs.push(1.0);
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs.windows(2)
        .map(|w| adaptive(f, w[0], w[1], gauss(f, w[0], w[1]), 1e-14, 50))
        .sum()
}

/// Random distribution as `(hops, duration, count)` triples.
pub fn random_distribution(r: &mut rand_chacha::ChaCha8Rng) -> Vec<(u32, u32, u64)> {
    let atoms = r.random_range(1..=12);
    (0..atoms)
        .map(|_| {
            let d = r.random_range(1..=20);
            (r.random_range(1..=d), d, r.random_range(1..=50))
        })
        .collect()
}

/// `P(X > λ)` computed directly from the counts.
pub fn tail(atoms: &[(u32, u32, u64)], lambda: f64) -> f64 {
    let total: u64 = atoms.iter().map(|a| a.2).sum();
    let above: u64 = atoms
        .iter()
        .filter(|a| a.0 as f64 / a.1 as f64 > lambda)
        .map(|a| a.2)
        .sum();
    above as f64 / total as f64
}

pub fn survival(atoms: &[(u32, u32, u64)]) -> Survival {
    let mut d = OccupancyDistribution::new();
    for &(h, t, n) in atoms {
        d.add_n(occupancy_rate(h, t).unwrap(), n);
    }
    Survival::from_distribution(&d).unwrap()
}
