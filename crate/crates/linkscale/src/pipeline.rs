//! Runs over a grid of aggregation periods.

use std::str::FromStr;

use linkscale_core::classic::ClassicStats;
use linkscale_core::validate::{ElongationSampling, ElongationSummary};
use linkscale_core::{
    aggregate, lost_fraction, select_gamma, CurvePoint, DeltaGrid, LinkStream, LossCount, MetricCurve, MetricId,
    OccupancyDistribution, Result, Survival,
};

use crate::par::Workers;

/// Which aggregation periods to visit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GridSpec {
    /// Log-spaced periods between the resolution and the whole horizon.
    Log(usize),
    /// Explicit window counts.
    Windows(Vec<u32>),
}

impl GridSpec {
    pub fn resolve(&self, stream: &LinkStream) -> Result<DeltaGrid> {
        match self {
            GridSpec::Log(points) => DeltaGrid::log_spaced(stream, *points),
            GridSpec::Windows(ks) => DeltaGrid::from_windows(stream, ks),
        }
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let bad = || format!("grid `{s}` is not `log:<points>` or a comma-separated K list");
        if let Some(p) = s.strip_prefix("log:") {
            let points: usize = p.parse().map_err(|_| bad())?;
            if points < 2 {
                return Err("a log grid needs at least 2 points".into());
            }
            return Ok(GridSpec::Log(points));
        }
        let ks = s
            .split(',')
            .map(|k| k.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| bad())?;
        if ks.is_empty() || ks.contains(&0) {
            return Err(bad());
        }
        Ok(GridSpec::Windows(ks))
    }
}

impl std::fmt::Display for GridSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GridSpec::Log(p) => write!(f, "log:{p}"),
            GridSpec::Windows(ks) => {
                let ks: Vec<String> = ks.iter().map(u32::to_string).collect();
                f.write_str(&ks.join(","))
            }
        }
    }
}

/// Everything computed at one grid point.
#[derive(Clone, Debug)]
pub struct GridResult {
    pub windows: u32,
    pub delta_seconds: f64,
    pub distribution: OccupancyDistribution,
    pub survival: Survival,
    pub scores: Vec<(MetricId, f64)>,
    pub classic: Option<ClassicStats>,
}

#[derive(Clone, Debug)]
pub struct Sweep {
    pub points: Vec<GridResult>,
    pub curves: Vec<MetricCurve>,
    pub gamma: Vec<(MetricId, CurvePoint)>,
}

impl Sweep {
    pub fn gamma_of(&self, metric: MetricId) -> Option<CurvePoint> {
        self.gamma.iter().find(|g| g.0 == metric).map(|g| g.1)
    }
}

/// Aggregates at every grid point, scores the occupancy distribution with
/// each metric and selects γ per metric.
pub fn run_sweep(
    stream: &LinkStream,
    grid: &DeltaGrid,
    metrics: &[MetricId],
    classic: bool,
    workers: &Workers,
) -> Result<Sweep> {
    let mut points = Vec::with_capacity(grid.len());
    let mut curves: Vec<MetricCurve> = metrics.iter().map(|&m| MetricCurve::new(m)).collect();
    for (k, delta) in grid.iter() {
        let series = aggregate(stream, k)?;
        let out = workers.sweep(&series);
        let survival = Survival::from_distribution(&out.distribution)?;
        let mut scores = Vec::with_capacity(metrics.len());
        for (m, curve) in metrics.iter().zip(curves.iter_mut()) {
            let score = m.score(&survival)?;
            curve.push(k, delta, score);
            scores.push((*m, score));
        }
        log::info!("K = {k}, Δ = {delta:.1} s: {} minimal trips", out.distribution.total());
        points.push(GridResult {
            windows: k,
            delta_seconds: delta,
            classic: classic.then(|| ClassicStats::new(&series, &out.distances)),
            distribution: out.distribution,
            survival,
            scores,
        });
    }
    let gamma = curves
        .iter()
        .map(|c| select_gamma(c).map(|p| (c.metric, p)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Sweep { points, curves, gamma })
}

/// Classical statistics at every grid point.
pub fn run_classic(stream: &LinkStream, grid: &DeltaGrid, workers: &Workers) -> Result<Vec<(u32, f64, ClassicStats)>> {
    grid.iter()
        .map(|(k, delta)| {
            let series = aggregate(stream, k)?;
            let out = workers.sweep(&series);
            log::info!("K = {k}: classic statistics");
            Ok((k, delta, ClassicStats::new(&series, &out.distances)))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LossRow {
    pub windows: u32,
    pub delta_seconds: f64,
    pub loss: LossCount,
    pub elongation: ElongationSummary,
}

/// Lost shortest transitions and mean elongation at each window count.
pub fn run_validate(
    stream: &LinkStream,
    grid: &DeltaGrid,
    sampling: &ElongationSampling,
    workers: &Workers,
) -> Result<Vec<LossRow>> {
    let transitions = workers.shortest_transitions(stream);
    log::info!("{} shortest transitions", transitions.len());
    grid.iter()
        .map(|(k, delta)| {
            let series = aggregate(stream, k)?;
            let dist = workers.sweep(&series).distribution;
            let eligible = dist.total() - dist.single_snapshot_trips();
            let elongation = workers.elongation(stream, &series, eligible, sampling);
            log::info!("K = {k}: {} elongation samples", elongation.samples);
            Ok(LossRow {
                windows: k,
                delta_seconds: delta,
                loss: lost_fraction(&transitions, stream.horizon(), k),
                elongation,
            })
        })
        .collect()
}

/// Occupancy distribution at a single window count.
pub fn run_distribution(
    stream: &LinkStream,
    windows: u32,
    workers: &Workers,
) -> Result<(OccupancyDistribution, Survival)> {
    let series = aggregate(stream, windows)?;
    let dist = workers.sweep(&series).distribution;
    let survival = Survival::from_distribution(&dist)?;
    Ok((dist, survival))
}
