//! Exhaustive checks of scheduling claims on small instances.
//!
//! The enumerator never touches the simulator: it runs every permutation
//! back to back and sums prefix bursts directly, so it stays an independent
//! check on the engine's SJF schedule.

use std::thread;

use thiserror::Error;

use crate::engine::{simulate, SimConfig, SimError};
use crate::metrics::{compute_metrics, detect_starvation, MetricsError, Rational};
use crate::policy::PolicySpec;
use crate::workload::{Pid, ProcessSpec, Workload};

/// Largest instance the enumerator accepts (8! = 40320 orders).
pub const MAX_PROCESSES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduleOracleResult {
    pub best_avg_waiting: Rational,
    /// Lexicographically smallest pid sequence achieving the optimum.
    pub best_order: Vec<Pid>,
    pub evaluated_count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("oracle needs between 1 and {MAX_PROCESSES} processes, got {0}")]
    TooManyProcesses(usize),
    #[error("oracle requires every arrival to be 0; {pid} arrives at {arrival}")]
    NonzeroArrival { pid: Pid, arrival: u64 },
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

fn check(workload: &Workload) -> Result<(), OracleError> {
    let n = workload.len();
    if n == 0 || n > MAX_PROCESSES {
        return Err(OracleError::TooManyProcesses(n));
    }
    if let Some(p) = workload.processes().iter().find(|p| p.arrival != 0) {
        return Err(OracleError::NonzeroArrival {
            pid: p.pid,
            arrival: p.arrival,
        });
    }
    Ok(())
}

/// Best (total waiting, order) over every permutation that starts with
/// `prefix`, visited in lexicographic pid order.
#[derive(Debug, Clone)]
struct Best {
    total_waiting: u64,
    order: Vec<Pid>,
    count: u64,
}

impl Best {
    fn merge(self, other: Best) -> Best {
        let count = self.count + other.count;
        let keep_self = (self.total_waiting, &self.order) <= (other.total_waiting, &other.order);
        let mut best = if keep_self { self } else { other };
        best.count = count;
        best
    }
}

fn search(jobs: &[ProcessSpec], first: usize) -> Best {
    let n = jobs.len();
    let mut best = Best {
        total_waiting: u64::MAX,
        order: Vec::new(),
        count: 0,
    };
    let mut used = vec![false; n];
    let mut order = Vec::with_capacity(n);
    used[first] = true;
    order.push(first);
    descend(jobs, &mut used, &mut order, jobs[first].burst, 0, &mut best);
    best
}

// `elapsed` is the finish time of the last job in `order`; `waiting` the sum
// of start times so far.
fn descend(
    jobs: &[ProcessSpec],
    used: &mut [bool],
    order: &mut Vec<usize>,
    elapsed: u64,
    waiting: u64,
    best: &mut Best,
) {
    if order.len() == jobs.len() {
        best.count += 1;
        if waiting < best.total_waiting {
            best.total_waiting = waiting;
            best.order = order.iter().map(|&i| jobs[i].pid).collect();
        }
        return;
    }
    for i in 0..jobs.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        order.push(i);
        descend(
            jobs,
            used,
            order,
            elapsed + jobs[i].burst,
            waiting + elapsed,
            best,
        );
        order.pop();
        used[i] = false;
    }
}

fn sorted_jobs(workload: &Workload) -> Vec<ProcessSpec> {
    let mut jobs = workload.processes().to_vec();
    jobs.sort_by_key(|p| p.pid);
    jobs
}

fn finish(best: Best, n: usize) -> ScheduleOracleResult {
    ScheduleOracleResult {
        best_avg_waiting: Rational::new(best.total_waiting, n as u64),
        best_order: best.order,
        evaluated_count: best.count,
    }
}

/// Evaluates every non-preemptive back-to-back order of a zero-arrival
/// workload and returns the minimum average waiting time.
pub fn enumerate_best_order(workload: &Workload) -> Result<ScheduleOracleResult, OracleError> {
    check(workload)?;
    let jobs = sorted_jobs(workload);
    // Orders are visited lexicographically and only strict improvements
    // replace the incumbent, so the first optimum found is the smallest.
    let best = (0..jobs.len())
        .map(|first| search(&jobs, first))
        .reduce(Best::merge)
        .expect("at least one process");
    Ok(finish(best, jobs.len()))
}

/// Same result as [`enumerate_best_order`], with one thread per leading pid.
pub fn enumerate_best_order_parallel(
    workload: &Workload,
) -> Result<ScheduleOracleResult, OracleError> {
    check(workload)?;
    let jobs = sorted_jobs(workload);
    let partials: Vec<Best> = thread::scope(|s| {
        let handles: Vec<_> = (0..jobs.len())
            .map(|first| {
                let jobs = &jobs;
                s.spawn(move || search(jobs, first))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("oracle worker panicked"))
            .collect()
    });
    let best = partials
        .into_iter()
        .reduce(Best::merge)
        .expect("at least one process");
    Ok(finish(best, jobs.len()))
}

/// True when the simulator's SJF schedule reaches the enumerated optimum.
pub fn verify_sjf_optimal(workload: &Workload) -> Result<bool, OracleError> {
    let best = enumerate_best_order(workload)?;
    let trace = simulate(workload, &PolicySpec::Sjf, &SimConfig::default())?;
    let (_, summary) = compute_metrics(&trace, workload)?;
    Ok(summary.avg_waiting == best.best_avg_waiting)
}

/// A stream of urgent jobs: one priority-1 job of `burst` ms released every
/// `burst` ms starting at time 0, so the CPU never runs out of urgent work.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UrgentStream {
    pub burst: u64,
}

impl UrgentStream {
    /// Jobs released strictly before `horizon`, with pids counting up from
    /// `first_pid`.
    pub fn jobs(&self, horizon: u64, first_pid: u32) -> Vec<ProcessSpec> {
        (0..)
            .map(|k: u64| k * self.burst)
            .take_while(|&t| t < horizon)
            .zip(first_pid..)
            .map(|(t, pid)| ProcessSpec::new(pid, t, self.burst).with_priority(1))
            .collect()
    }
}

/// Builds the starvation witness workload: the victim first, then the stream
/// with pids following the victim's.
pub fn starvation_workload(
    horizon: u64,
    stream: Option<UrgentStream>,
    victim: ProcessSpec,
) -> Workload {
    let mut processes = vec![victim];
    if let Some(stream) = stream {
        processes.extend(stream.jobs(horizon, victim.pid.0 + 1));
    }
    Workload::new(processes)
}

/// Runs the starvation witness under preemptive priority and reports whether
/// `victim` went undispatched up to `horizon`.
pub fn demonstrate_priority_starvation(
    horizon: u64,
    stream: Option<UrgentStream>,
    victim: ProcessSpec,
) -> bool {
    let workload = starvation_workload(horizon, stream, victim);
    let policy = PolicySpec::Priority { preemptive: true };
    match simulate(&workload, &policy, &SimConfig::default()) {
        Ok(trace) => detect_starvation(&trace.truncate(horizon), &workload).contains(&victim.pid),
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bursts(bs: &[u64]) -> Workload {
        bs.iter()
            .enumerate()
            .map(|(i, &b)| ProcessSpec::new(i as u32, 0, b))
            .collect()
    }

    #[test]
    fn five_job_optimum() {
        let r = enumerate_best_order(&bursts(&[12, 2, 3, 2, 6])).unwrap();
        assert_eq!(r.best_avg_waiting, Rational::new(26, 5));
        assert_eq!(r.best_order, [1, 3, 2, 4, 0].map(Pid).to_vec());
        assert_eq!(r.evaluated_count, 120);
        assert!(verify_sjf_optimal(&bursts(&[12, 2, 3, 2, 6])).unwrap());
    }

    #[test]
    fn trivial_instances() {
        let r = enumerate_best_order(&bursts(&[7])).unwrap();
        assert_eq!(r.best_avg_waiting, Rational::from_integer(0));
        assert_eq!(r.evaluated_count, 1);

        let r = enumerate_best_order(&bursts(&[2, 2])).unwrap();
        assert_eq!(r.best_avg_waiting, Rational::from_integer(1));
        assert_eq!(r.best_order, vec![Pid(0), Pid(1)]);
        assert!(verify_sjf_optimal(&bursts(&[4, 4, 4])).unwrap());
    }

    #[test]
    fn guards() {
        assert_eq!(
            enumerate_best_order(&bursts(&[1; 9])),
            Err(OracleError::TooManyProcesses(9))
        );
        assert_eq!(
            enumerate_best_order(&Workload::default()),
            Err(OracleError::TooManyProcesses(0))
        );
        let staggered = Workload::new(vec![ProcessSpec::new(0, 0, 3), ProcessSpec::new(1, 2, 1)]);
        assert_eq!(
            enumerate_best_order(&staggered),
            Err(OracleError::NonzeroArrival {
                pid: Pid(1),
                arrival: 2
            })
        );
        assert!(verify_sjf_optimal(&staggered).is_err());
    }

    #[test]
    fn parallel_matches_sequential() {
        for w in [
            bursts(&[12, 2, 3, 2, 6]),
            bursts(&[5, 5, 1, 9, 1, 3, 3, 2]),
            bursts(&[1]),
        ] {
            assert_eq!(
                enumerate_best_order(&w).unwrap(),
                enumerate_best_order_parallel(&w).unwrap()
            );
        }
        assert_eq!(
            enumerate_best_order_parallel(&bursts(&[1; 8]))
                .unwrap()
                .evaluated_count,
            40320
        );
    }

    #[test]
    fn order_respects_pid_labels_not_positions() {
        let w = Workload::new(vec![ProcessSpec::new(9, 0, 1), ProcessSpec::new(2, 0, 1)]);
        let r = enumerate_best_order(&w).unwrap();
        assert_eq!(r.best_order, vec![Pid(2), Pid(9)]);
    }

    #[test]
    fn starvation_witness() {
        let victim = ProcessSpec::new(9, 0, 5).with_priority(9);
        let stream = Some(UrgentStream { burst: 4 });
        assert!(demonstrate_priority_starvation(1000, stream, victim));
        assert!(!demonstrate_priority_starvation(1000, None, victim));
        let equal = ProcessSpec::new(9, 0, 5).with_priority(1);
        assert!(!demonstrate_priority_starvation(1000, stream, equal));
    }

    #[test]
    fn stream_jobs() {
        let jobs = UrgentStream { burst: 4 }.jobs(10, 1);
        let summary: Vec<_> = jobs.iter().map(|p| (p.pid.0, p.arrival)).collect();
        assert_eq!(summary, vec![(1, 0), (2, 4), (3, 8)]);
    }
}
