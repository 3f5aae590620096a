//! File formats, parallel drivers, reports and the command line around
//! [`linkscale_core`].

pub mod ingest;
pub mod par;
pub mod pipeline;
pub mod report;

pub use linkscale_core;
