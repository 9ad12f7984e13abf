//! Per-process and aggregate scheduling criteria computed from a trace.

use std::collections::{BTreeSet, HashMap};

use num_rational::Ratio;
use num_traits::Zero;
use thiserror::Error;

use crate::engine::ExecutionTrace;
use crate::gantt::SegmentLabel;
use crate::workload::{Pid, Workload};

/// Exact non-negative rational, used for every average and rate.
pub type Rational = Ratio<u64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProcessMetrics {
    pub pid: Pid,
    pub completion: u64,
    pub turnaround: u64,
    pub waiting: u64,
    pub response: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SummaryMetrics {
    pub avg_turnaround: Rational,
    pub avg_waiting: Rational,
    pub avg_response: Rational,
    /// Completed processes per millisecond.
    pub throughput: Rational,
    pub cpu_utilization: Rational,
    pub makespan: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("trace and workload disagree about {0}")]
    PidMismatch(Pid),
    #[error("{pid} ran {ran} ms of a {burst} ms burst")]
    IncompleteProcess { pid: Pid, ran: u64, burst: u64 },
}

#[derive(Default)]
struct Observed {
    first_start: u64,
    last_end: u64,
    ran: u64,
}

/// Computes metrics for every process of `workload`, in workload order.
///
/// Waiting time is turnaround minus burst: every non-running moment of a
/// pure CPU-burst process is spent in the ready queue.
pub fn compute_metrics(
    trace: &ExecutionTrace,
    workload: &Workload,
) -> Result<(Vec<ProcessMetrics>, SummaryMetrics), MetricsError> {
    let mut seen: HashMap<Pid, Observed> = HashMap::new();
    for seg in &trace.segments {
        if let SegmentLabel::Process(pid) = seg.label {
            if workload.get(pid).is_none() {
                return Err(MetricsError::PidMismatch(pid));
            }
            let o = seen.entry(pid).or_insert(Observed {
                first_start: seg.start,
                ..Observed::default()
            });
            o.first_start = o.first_start.min(seg.start);
            o.last_end = o.last_end.max(seg.end);
            o.ran += seg.duration();
        }
    }

    let mut per_process = Vec::with_capacity(workload.len());
    for spec in workload.processes() {
        let o = seen
            .get(&spec.pid)
            .ok_or(MetricsError::PidMismatch(spec.pid))?;
        if o.ran != spec.burst {
            return Err(MetricsError::IncompleteProcess {
                pid: spec.pid,
                ran: o.ran,
                burst: spec.burst,
            });
        }
        let turnaround = o.last_end - spec.arrival;
        per_process.push(ProcessMetrics {
            pid: spec.pid,
            completion: o.last_end,
            turnaround,
            waiting: turnaround - spec.burst,
            response: o.first_start - spec.arrival,
        });
    }

    let busy: u64 = trace
        .segments
        .iter()
        .filter(|s| s.label != SegmentLabel::Idle)
        .map(|s| s.duration())
        .sum();
    let summary = SummaryMetrics {
        avg_turnaround: mean(per_process.iter().map(|m| m.turnaround)),
        avg_waiting: mean(per_process.iter().map(|m| m.waiting)),
        avg_response: mean(per_process.iter().map(|m| m.response)),
        throughput: ratio_or_zero(per_process.len() as u64, trace.makespan),
        cpu_utilization: ratio_or_zero(busy, trace.makespan),
        makespan: trace.makespan,
    };
    Ok((per_process, summary))
}

fn mean(values: impl ExactSizeIterator<Item = u64>) -> Rational {
    let n = values.len() as u64;
    ratio_or_zero(values.sum(), n)
}

fn ratio_or_zero(num: u64, den: u64) -> Rational {
    if den == 0 {
        Rational::zero()
    } else {
        Rational::new(num, den)
    }
}

/// Pids of `workload` with no running time anywhere in `trace`.
pub fn detect_starvation(trace: &ExecutionTrace, workload: &Workload) -> BTreeSet<Pid> {
    let ran: BTreeSet<Pid> = trace
        .segments
        .iter()
        .filter(|s| s.start < s.end)
        .filter_map(|s| s.label.pid())
        .collect();
    workload
        .processes()
        .iter()
        .map(|p| p.pid)
        .filter(|pid| !ran.contains(pid))
        .collect()
}

/// Renders `value` with `places` decimals, rounding half up.
pub fn format_decimal(value: Rational, places: u32) -> String {
    let scale = 10u128.pow(places);
    let numer = u128::from(*value.numer());
    let denom = u128::from(*value.denom());
    let scaled = (2 * numer * scale + denom) / (2 * denom);
    if places == 0 {
        return scaled.to_string();
    }
    let int = scaled / scale;
    let frac = scaled % scale;
    format!("{int}.{frac:0width$}", width = places as usize)
}
