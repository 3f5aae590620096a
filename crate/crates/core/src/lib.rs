//! Saturation time scale of link streams.
//!
//! A link stream is a finite set of timestamped node-pair events. Aggregating
//! it on disjoint windows of length `Δ = T/K` yields a graph series; this crate
//! measures how much of the stream's propagation structure (temporal paths)
//! survives a given `Δ`, and picks the largest `Δ` that still spreads the
//! occupancy rates of minimal trips uniformly over `[0, 1]`.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, parallel
//! drivers and the command line live in the `linkscale` crate.

#![no_std]

extern crate alloc;

pub mod aggregate;
pub mod classic;
pub mod error;
pub mod occmetrics;
pub mod reach;
pub mod stream;
pub mod synth;
pub mod validate;

pub use aggregate::{aggregate, DeltaGrid, GraphSeries, Snapshot};
pub use classic::{distance_stats, snapshot_stats, ClassicStats, DistanceStats, SnapshotStats};
pub use error::{Error, Result};
pub use occmetrics::{select_gamma, CurvePoint, MetricCurve, MetricId, SpreadScores, Survival};
pub use reach::{
    minimal_trip_sweep, occupancy_rate, stream_earliest_arrival, ArrivalColumn, DistanceSums, MinimalTrip, Occupancy,
    OccupancyDistribution, StreamQuery, SweepOutput,
};
pub use stream::{BuildStats, Event, LinkStream, NodeId, StreamBuilder, StreamSummary, Time};
pub use synth::{gen_two_mode, gen_uniform, TwoModeSpec, UniformSpec};
pub use validate::{
    enumerate_shortest_transitions, lost_fraction, ElongationSummary, LossCount, ShortestTransition, TransitionColumn,
};
