//! Deterministic single-CPU scheduling simulator.
//!
//! Four disciplines are supported: first come first served, non-preemptive
//! shortest job first, round robin, and fixed priority (preemptive or not).
//! Time is integer milliseconds throughout and every average is an exact
//! rational, so reports are reproducible byte for byte.
//!
//! ```
//! use cpusched_core::{compute_metrics, format_decimal, parse_workload, simulate, PolicySpec, SimConfig};
//!
//! let w = parse_workload("pid,arrival,burst\n0,0,12\n1,0,2\n2,0,3\n3,0,2\n4,0,6").unwrap();
//! let trace = simulate(&w, &PolicySpec::Sjf, &SimConfig::default()).unwrap();
//! let (_, summary) = compute_metrics(&trace, &w).unwrap();
//! assert_eq!(format_decimal(summary.avg_turnaround, 1), "10.2");
//! ```

pub mod engine;
pub mod gantt;
pub mod metrics;
pub mod oracle;
pub mod policy;
pub mod report;
pub mod workload;

use thiserror::Error;

pub use engine::{
    simulate, EngineState, ExecutionTrace, ProcessState, SimConfig, SimError, TransitionEvent,
};
pub use gantt::{build_gantt, render_ascii, render_svg, GanttSegment, SegmentLabel};
pub use metrics::{
    compute_metrics, detect_starvation, format_decimal, MetricsError, ProcessMetrics, Rational,
    SummaryMetrics,
};
pub use oracle::{
    demonstrate_priority_starvation, enumerate_best_order, enumerate_best_order_parallel,
    verify_sjf_optimal, OracleError, ScheduleOracleResult, UrgentStream,
};
pub use policy::{select_next, should_preempt, time_slice, PolicyError, PolicySpec, ReadyEntry};
pub use report::{Comparison, OutputFormat, RunReport};
pub use workload::{
    parse_workload, validate, Pid, ProcessSpec, ValidationIssue, Workload, WorkloadError,
};

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Workload(#[from] WorkloadError),
    #[error(transparent)]
    Policy(#[from] PolicyError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("format `{0}` is not available for `{1}`")]
    UnsupportedFormat(&'static str, &'static str),
}
