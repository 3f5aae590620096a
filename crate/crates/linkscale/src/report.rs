//! JSON reports and CSV tables.
//!
//! Floats are printed with 12 significant digits; JSON values are rounded to
//! that precision before serialization so both encodings agree.

use std::collections::BTreeMap;

use linkscale_core::classic::ClassicStats;
use linkscale_core::{LinkStream, MetricCurve, Survival};
use serde::Serialize;

use crate::ingest::{Format, Ingested};
use crate::pipeline::{LossRow, Sweep};

/// `x` with 12 significant digits, in plain decimal notation.
pub fn fmt12(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if x == 0.0 {
        return "0".into();
    }
    round12(x).to_string()
}

/// `x` rounded to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if x.is_finite() {
        format!("{x:.11e}").parse().unwrap()
    } else {
        x
    }
}

fn opt12(x: Option<f64>) -> String {
    x.map(fmt12).unwrap_or_default()
}

#[derive(Clone, Debug, Serialize)]
pub struct InputInfo {
    pub path: String,
    pub format: Format,
    pub directed: bool,
    pub nodes: u32,
    pub events: u64,
    pub raw_events: u64,
    pub self_loops: u64,
    pub duplicates: u64,
    pub horizon: u64,
    pub resolution: u64,
    pub t_origin: i64,
}

impl InputInfo {
    pub fn new(path: &str, format: Format, ingested: &Ingested) -> Self {
        let s = &ingested.stream;
        InputInfo {
            path: path.to_string(),
            format,
            directed: s.is_directed(),
            nodes: s.node_count(),
            events: s.event_count() as u64,
            raw_events: ingested.stats.raw_events,
            self_loops: ingested.stats.self_loops,
            duplicates: ingested.stats.duplicates,
            horizon: s.horizon(),
            resolution: s.resolution(),
            t_origin: s.t_origin(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepParams {
    pub grid: String,
    pub windows: Vec<u32>,
    pub metrics: Vec<String>,
    pub classic: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassicEntry {
    pub density: f64,
    pub degree: f64,
    pub largest_cc: f64,
    pub non_isolated: f64,
    pub d_time: Option<f64>,
    pub d_hops: Option<f64>,
    pub d_time_abs: Option<f64>,
    pub finite_frac: f64,
}

impl From<&ClassicStats> for ClassicEntry {
    fn from(c: &ClassicStats) -> Self {
        ClassicEntry {
            density: round12(c.snapshots.mean_density),
            degree: round12(c.snapshots.mean_degree),
            largest_cc: round12(c.snapshots.mean_largest_cc),
            non_isolated: round12(c.snapshots.mean_non_isolated),
            d_time: c.distances.mean_d_time.map(round12),
            d_hops: c.distances.mean_d_hops.map(round12),
            d_time_abs: c.distances.mean_d_time_abs.map(round12),
            finite_frac: round12(c.distances.finite_pair_fraction),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GridEntry {
    #[serde(rename = "K")]
    pub windows: u32,
    pub delta_s: f64,
    pub trip_count: u64,
    pub single_snapshot_trips: u64,
    pub distinct_rates: usize,
    /// `[λ, P(X > λ)]` at `λ = 0, 0.05, ..., 1`.
    pub icd: Vec<[f64; 2]>,
    pub scores: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classic: Option<ClassicEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GammaEntry {
    #[serde(rename = "K")]
    pub windows: u32,
    pub delta_s: f64,
    pub score: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub input: InputInfo,
    pub parameters: SweepParams,
    pub grid: Vec<GridEntry>,
    pub gamma: BTreeMap<String, GammaEntry>,
}

const ICD_SAMPLES: u32 = 20;

impl SweepReport {
    pub fn new(input: InputInfo, grid_spec: String, classic: bool, sweep: &Sweep) -> Self {
        let grid = sweep
            .points
            .iter()
            .map(|p| GridEntry {
                windows: p.windows,
                delta_s: round12(p.delta_seconds),
                trip_count: p.distribution.total(),
                single_snapshot_trips: p.distribution.single_snapshot_trips(),
                distinct_rates: p.distribution.rates().len(),
                icd: (0..=ICD_SAMPLES)
                    .map(|i| {
                        let l = i as f64 / ICD_SAMPLES as f64;
                        [round12(l), round12(p.survival.icd(l))]
                    })
                    .collect(),
                scores: p.scores.iter().map(|(m, s)| (m.to_string(), round12(*s))).collect(),
                classic: p.classic.as_ref().map(ClassicEntry::from),
            })
            .collect();
        let gamma = sweep
            .gamma
            .iter()
            .map(|(m, g)| {
                let e = GammaEntry {
                    windows: g.windows,
                    delta_s: round12(g.delta_seconds),
                    score: round12(g.score),
                };
                (m.to_string(), e)
            })
            .collect();
        SweepReport {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            input,
            parameters: SweepParams {
                grid: grid_spec,
                windows: sweep.points.iter().map(|p| p.windows).collect(),
                metrics: sweep.curves.iter().map(MetricCurve::label).collect(),
                classic,
            },
            grid,
            gamma,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

/// `K,delta_s,score` along the grid.
pub fn curve_csv(curve: &MetricCurve) -> String {
    csv_string(
        &["K", "delta_s", "score"],
        curve
            .points
            .iter()
            .map(|p| vec![p.windows.to_string(), fmt12(p.delta_seconds), fmt12(p.score)]),
    )
}

/// File name of a metric's curve, e.g. `curve_shannon10.csv`.
pub fn curve_file_name(curve: &MetricCurve) -> String {
    format!("curve_{}.csv", curve.label().replace(':', ""))
}

/// `lambda,icd` at every breakpoint, from `λ = 0` to `λ = 1`.
pub fn icd_csv(survival: &Survival) -> String {
    csv_string(
        &["lambda", "icd"],
        survival.points().into_iter().map(|(l, p)| vec![fmt12(l), fmt12(p)]),
    )
}

pub fn classic_csv(rows: &[(u32, f64, ClassicStats)]) -> String {
    csv_string(
        &[
            "K",
            "delta_s",
            "density",
            "degree",
            "largest_cc",
            "non_isolated",
            "d_time",
            "d_hops",
            "d_time_abs",
            "finite_frac",
        ],
        rows.iter().map(|(k, delta, c)| {
            vec![
                k.to_string(),
                fmt12(*delta),
                fmt12(c.snapshots.mean_density),
                fmt12(c.snapshots.mean_degree),
                fmt12(c.snapshots.mean_largest_cc),
                fmt12(c.snapshots.mean_non_isolated),
                opt12(c.distances.mean_d_time),
                opt12(c.distances.mean_d_hops),
                opt12(c.distances.mean_d_time_abs),
                fmt12(c.distances.finite_pair_fraction),
            ]
        }),
    )
}

pub fn loss_csv(rows: &[LossRow]) -> String {
    csv_string(
        &["K", "delta_s", "lost_fraction", "mean_elongation", "samples"],
        rows.iter().map(|r| {
            vec![
                r.windows.to_string(),
                fmt12(r.delta_seconds),
                opt12(r.loss.fraction()),
                opt12(r.elongation.mean),
                r.elongation.samples.to_string(),
            ]
        }),
    )
}

/// `id \t label` for every node.
pub fn node_map_tsv(stream: &LinkStream) -> String {
    let mut out = String::from("# id\tlabel\n");
    for (i, l) in stream.labels().iter().enumerate() {
        out.push_str(&format!("{i}\t{l}\n"));
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct SummaryReport {
    pub nodes: u32,
    pub events: u64,
    pub raw_events: u64,
    pub self_loops: u64,
    pub duplicates: u64,
    pub horizon: u64,
    pub resolution: u64,
    pub t_origin: i64,
    pub activity_per_day: f64,
    pub mean_inter_contact_s: f64,
}

impl SummaryReport {
    pub fn new(ingested: &Ingested) -> Self {
        let s = ingested.stream.summary();
        SummaryReport {
            nodes: s.nodes,
            events: s.events,
            raw_events: ingested.stats.raw_events,
            self_loops: ingested.stats.self_loops,
            duplicates: ingested.stats.duplicates,
            horizon: s.horizon,
            resolution: s.resolution,
            t_origin: ingested.stream.t_origin(),
            activity_per_day: round12(s.activity_per_day),
            mean_inter_contact_s: round12(s.mean_inter_contact_s),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(fmt12(0.0), "0");
        assert_eq!(fmt12(1.0), "1");
        assert_eq!(fmt12(0.5), "0.5");
        assert_eq!(fmt12(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt12(2.0 / 3.0 * 1e4), "6666.66666667");
        assert_eq!(fmt12(123456789012345.0), "123456789012000");
        assert_eq!(fmt12(1e20), "100000000000000000000");
        assert_eq!(fmt12(-2.5e-7), "-0.00000025");
        assert_eq!(fmt12(f64::NAN), "nan");
        assert_eq!(round12(0.1 + 0.2), 0.3);
    }
}
