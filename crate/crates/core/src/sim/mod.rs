//! Discrete-event simulation of one scenario, and paired-seed comparisons
//! across policies.

mod compare;
mod engine;
mod metrics;
mod scenario;

pub use compare::{compare, replicate, Replicated};
pub use engine::{run, run_with, RequestRecord, RunReport, Served};
pub use metrics::{Counts, MetricsWindow};
pub use scenario::{analytic_optimum, PolicyKind, PolicySpec, Scenario};
