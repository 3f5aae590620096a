mod common;

use common::*;
use linkscale_core::validate::{elongation, mean_elongation, ElongationSampling};
use linkscale_core::{
    aggregate, enumerate_shortest_transitions, lost_fraction, minimal_trip_sweep, ArrivalColumn, Event, LinkStream,
    StreamQuery,
};
use rand::Rng;

#[test]
fn shortest_transitions_match_brute_force() {
    let mut r = rng(0xab);
    for case in 0..500 {
        let n = r.random_range(3..=7);
        let m = r.random_range(n as usize..=30);
        let horizon = r.random_range(5..=40);
        let s = random_stream(&mut r, n, m, horizon, case % 2 == 1);
        assert_eq!(
            enumerate_shortest_transitions(&s),
            brute_transitions(&s),
            "case {case}: {:?}",
            s.events()
        );
    }
}

#[test]
fn fastest_query_matches_brute_force() {
    let mut r = rng(5);
    let mut q = StreamQuery::new(6);
    for case in 0..300 {
        let s = random_stream(&mut r, 6, 20, 30, case % 2 == 0);
        let a = r.random_range(0..6);
        let c = r.random_range(0..6);
        if a == c {
            continue;
        }
        let lo = r.random_range(0..30);
        let hi = r.random_range(lo..30);
        let got = q.fastest(&s, a, c, lo, hi).map(|(d, arr)| {
            assert!(lo <= d && arr <= hi);
            assert!(stream_reaches(&s, a, c, d, arr));
            arr - d
        });
        assert_eq!(got, brute_fastest(&s, a, c, lo, hi), "case {case}");
    }
}

#[test]
fn loss_endpoints() {
    let mut r = rng(8);
    for _ in 0..50 {
        let s = random_stream(&mut r, 6, 30, 50, false);
        let tr = enumerate_shortest_transitions(&s);
        if tr.is_empty() {
            continue;
        }
        assert_eq!(lost_fraction(&tr, s.horizon(), 1).fraction(), Some(1.0));
        assert_eq!(
            lost_fraction(&tr, s.horizon(), s.horizon() as u32).fraction(),
            Some(0.0)
        );
    }
    assert_eq!(lost_fraction(&[], 10, 3).fraction(), None);
}

#[test]
fn lost_fraction_monotone_on_nested_grids() {
    let mut r = rng(21);
    for _ in 0..50 {
        let s = random_stream(&mut r, 8, 40, 64, true);
        let tr = enumerate_shortest_transitions(&s);
        let mut prev = 0;
        for k in [64, 32, 16, 8, 4, 2, 1] {
            let lost = lost_fraction(&tr, 64, k).lost;
            assert!(lost >= prev);
            prev = lost;
        }
    }
}

#[test]
fn elongation_single_path() {
    let s = LinkStream::from_events(vec![Event::new(0, 2, 0), Event::new(2, 1, 9)], 3, 10, true).unwrap();
    let g = aggregate(&s, 2).unwrap();
    let summary = mean_elongation(&s, &g, &ElongationSampling::default());
    assert_eq!(summary.eligible, 1);
    assert_eq!(summary.samples, 1);
    assert!((summary.mean.unwrap() - 10.0 / 9.0).abs() < 1e-12);

    let s = LinkStream::from_events(vec![Event::new(0, 1, 0), Event::new(0, 1, 9)], 2, 10, true).unwrap();
    let g = aggregate(&s, 10).unwrap();
    let summary = mean_elongation(&s, &g, &ElongationSampling::default());
    assert_eq!((summary.eligible, summary.mean), (0, None));
}

#[test]
fn elongation_at_least_one_and_matches_brute_force() {
    let mut r = rng(13);
    for case in 0..300 {
        let n = r.random_range(3..=6);
        let horizon = r.random_range(4..=40);
        let k = r.random_range(1..=horizon.min(12) as u32);
        let s = random_stream(&mut r, n, 18, horizon, case % 2 == 0);
        let g = aggregate(&s, k).unwrap();
        let mut col = ArrivalColumn::new(n);
        let mut q = StreamQuery::new(n);
        for v in 0..n {
            let mut trips = Vec::new();
            col.sweep(&g, v, |t| trips.push(t));
            for trip in trips.into_iter().filter(|t| t.t_dep < t.t_arr) {
                // elongation() asserts time_L > 0 and e >= 1
                let e = elongation(&s, &g, trip, &mut q);
                assert!(e.factor() >= 1.0);
                let lo = g.window_start(trip.t_dep);
                let hi = g.window_end(trip.t_arr) - 1;
                let time_l = brute_fastest(&s, trip.u, trip.v, lo, hi).unwrap();
                assert_eq!(e.den, k as u128 * time_l as u128, "case {case}");
            }
        }
        let summary = mean_elongation(&s, &g, &ElongationSampling::default());
        let dist = minimal_trip_sweep(&g, None).distribution;
        assert_eq!(summary.eligible, dist.total() - dist.single_snapshot_trips());
        assert!(summary.mean.is_none_or(|m| m >= 1.0));
    }
}

#[test]
fn subsampling_is_seeded() {
    let mut r = rng(99);
    let s = random_stream(&mut r, 12, 300, 1000, false);
    let g = aggregate(&s, 40).unwrap();
    let sampling = ElongationSampling {
        full_below: 1,
        sample_size: 50,
        seed: 4,
    };
    let a = mean_elongation(&s, &g, &sampling);
    let b = mean_elongation(&s, &g, &sampling);
    assert_eq!(a, b);
    assert!(a.subsampled);
    assert!(a.samples < a.eligible);
    let full = mean_elongation(&s, &g, &ElongationSampling::default());
    assert!(!full.subsampled);
    assert_eq!(full.samples, full.eligible);
}
