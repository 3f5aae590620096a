//! Parallel drivers over destination columns.
//!
//! Every column is independent and the per-column results are integers or
//! sorted before reduction, so output does not depend on the worker count.

use linkscale_core::validate::{
    summarize_elongation, ElongationColumn, ElongationSample, ElongationSampling, ElongationSummary,
};
use linkscale_core::{
    ArrivalColumn, GraphSeries, LinkStream, NodeId, ShortestTransition, SweepOutput, TransitionColumn,
};
use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};

/// A fixed-size worker pool.
pub struct Workers {
    pool: ThreadPool,
}

impl Workers {
    /// `threads = 0` uses the available parallelism.
    pub fn new(threads: usize) -> Result<Self, rayon::ThreadPoolBuildError> {
        let pool = ThreadPoolBuilder::new().num_threads(threads).build()?;
        Ok(Workers { pool })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }

    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        self.pool.install(f)
    }

    /// Minimal-trip occupancy distribution and distance sums of `series`.
    pub fn sweep(&self, series: &GraphSeries) -> SweepOutput {
        let n = series.node_count();
        self.install(|| {
            (0..n)
                .into_par_iter()
                .fold(
                    || (ArrivalColumn::new(n), SweepOutput::default()),
                    |(mut col, mut out), v: NodeId| {
                        let dist = &mut out.distribution;
                        let sums = col.sweep(series, v, |t| dist.add(t.occupancy()));
                        out.distances.merge(&sums);
                        (col, out)
                    },
                )
                .map(|(_, out)| out)
                .reduce(SweepOutput::default, |mut a, b| {
                    a.merge(&b);
                    a
                })
        })
    }

    /// Shortest transitions of the stream, sorted.
    pub fn shortest_transitions(&self, stream: &LinkStream) -> Vec<ShortestTransition> {
        let n = stream.node_count();
        let mut out: Vec<ShortestTransition> = self.install(|| {
            (0..n)
                .into_par_iter()
                .map_init(
                    || TransitionColumn::new(n),
                    |col, c| {
                        let mut v = Vec::new();
                        col.scan(stream, c, &mut v);
                        v
                    },
                )
                .flatten()
                .collect()
        });
        out.par_sort_unstable();
        out
    }

    /// Mean elongation factor of the multi-snapshot minimal trips; `eligible`
    /// is their count, known from a prior sweep.
    pub fn elongation(
        &self,
        stream: &LinkStream,
        series: &GraphSeries,
        eligible: u64,
        sampling: &ElongationSampling,
    ) -> ElongationSummary {
        let n = series.node_count();
        let keep = sampling.keep_probability(eligible);
        let mut samples: Vec<ElongationSample> = self.install(|| {
            (0..n)
                .into_par_iter()
                .map_init(
                    || ElongationColumn::new(n),
                    |col, v| {
                        let mut out = Vec::new();
                        col.run(stream, series, v, keep, sampling.seed, &mut out);
                        out
                    },
                )
                .flatten()
                .collect()
        });
        summarize_elongation(&mut samples, eligible, keep.is_some())
    }
}
