//! Schedule search and analytic latency simulation for multi-tenant
//! accelerator inference.
//!
//! Each tenant model is an operator sequence pinned to its own stream;
//! synchronization barriers split the streams into aligned stages, and the
//! per-stream barrier positions (the pointer matrix) form a compact search
//! space over concurrency strategies. A deterministic roofline-plus-
//! contention simulator scores candidate schedules, black-box search drivers
//! optimize over the matrix space, and reporting renders the results as
//! Gantt charts, utilization curves, search traces, and comparison tables.

pub mod baselines;
pub mod error;
pub mod ir;
pub mod report;
mod rng;
pub mod search;
pub mod sim;
pub mod workload;

pub use error::{Error, Result};
pub use rng::sub_rng;
