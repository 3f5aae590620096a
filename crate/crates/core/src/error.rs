use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("link stream has no events")]
    EmptyStream,
    #[error("invalid link stream: {0}")]
    InvalidStream(String),
    #[error("window count {windows} outside 1..={max}")]
    WindowCount { windows: u64, max: u64 },
    #[error("grid needs at least 2 points, got {0}")]
    GridPoints(usize),
    #[error("occupancy needs 1 <= hops <= duration, got {hops} hops over {duration}")]
    Occupancy { hops: u32, duration: u32 },
    #[error("occupancy distribution is empty")]
    EmptyDistribution,
    #[error("shannon entropy needs at least 2 slots, got {0}")]
    ShannonSlots(u32),
    #[error("score curve is empty")]
    EmptyCurve,
    #[error("unknown metric `{0}`")]
    UnknownMetric(String),
    #[error("invalid generator parameters: {0}")]
    GeneratorSpec(String),
}
