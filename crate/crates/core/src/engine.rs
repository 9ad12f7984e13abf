//! Event-driven single-CPU simulator.
//!
//! The clock is an integer millisecond counter that jumps between events:
//! arrivals, dispatches, quantum expiries and completions. At any instant the
//! engine processes, in order:
//!
//! 1. the running process's completion or quantum expiry,
//! 2. arrivals at this instant, in submission order,
//! 3. the process preempted at this instant, if any, re-entering the ready
//!    queue behind the arrivals,
//! 4. a dispatch, when the CPU is free and the ready queue is not.
//!
//! Preemptive priority is only evaluated at arrival instants.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::gantt::{GanttSegment, SegmentLabel};
use crate::policy::{self, PolicySpec, ReadyEntry};
use crate::workload::{self, Pid, ValidationIssue, Workload};

/// Five-state process lifecycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProcessState {
    New,
    Ready,
    Running,
    Waiting,
    Terminated,
}

impl ProcessState {
    pub fn can_transition_to(self, to: ProcessState) -> bool {
        use ProcessState::*;
        matches!(
            (self, to),
            (New, Ready)
                | (Ready, Running)
                | (Running, Ready)
                | (Running, Waiting)
                | (Waiting, Ready)
                | (Running, Terminated)
        )
    }
}

impl fmt::Display for ProcessState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Self::New => "new",
            Self::Ready => "ready",
            Self::Running => "running",
            Self::Waiting => "waiting",
            Self::Terminated => "terminated",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SimConfig {
    /// Charged as an idle segment whenever the CPU passes directly from one
    /// process to a different one.
    pub context_switch_cost: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransitionEvent {
    pub time: u64,
    pub pid: Pid,
    pub from: ProcessState,
    pub to: ProcessState,
}

/// Full output of one simulation.
///
/// `segments` tile `[0, makespan)` in time order, with idle time as explicit
/// idle segments. `events` are ordered by time; events at the same instant
/// keep the order in which the engine produced them.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExecutionTrace {
    pub segments: Vec<GanttSegment>,
    pub events: Vec<TransitionEvent>,
    pub makespan: u64,
}

impl ExecutionTrace {
    /// Running segments of `pid`, in time order.
    pub fn running_intervals(&self, pid: Pid) -> impl Iterator<Item = &GanttSegment> + '_ {
        self.segments
            .iter()
            .filter(move |s| s.label == SegmentLabel::Process(pid))
    }

    pub fn running_time(&self, pid: Pid) -> u64 {
        self.running_intervals(pid)
            .map(GanttSegment::duration)
            .sum()
    }

    /// Order in which processes were first dispatched.
    pub fn dispatch_order(&self) -> Vec<Pid> {
        let mut order = Vec::new();
        for seg in &self.segments {
            if let SegmentLabel::Process(pid) = seg.label {
                if !order.contains(&pid) {
                    order.push(pid);
                }
            }
        }
        order
    }

    /// The trace as observed up to `horizon`: segments are clipped to
    /// `[0, horizon)` and later events dropped.
    pub fn truncate(&self, horizon: u64) -> ExecutionTrace {
        let segments = self
            .segments
            .iter()
            .filter(|s| s.start < horizon)
            .map(|s| GanttSegment {
                end: s.end.min(horizon),
                ..*s
            })
            .collect();
        let events = self
            .events
            .iter()
            .filter(|e| e.time < horizon)
            .copied()
            .collect();
        ExecutionTrace {
            segments,
            events,
            makespan: self.makespan.min(horizon),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("workload is empty")]
    EmptyWorkload,
    #[error("policy `{0}` requires every process to carry a priority")]
    PolicyRequiresPriority(PolicySpec),
    #[error("invalid workload: {}", join_issues(.0))]
    InvalidWorkload(Vec<ValidationIssue>),
    #[error("unknown pid {0}")]
    UnknownPid(Pid),
    #[error("illegal transition for {pid}: {from} -> {to}")]
    IllegalTransition {
        pid: Pid,
        from: ProcessState,
        to: ProcessState,
    },
}

fn join_issues(issues: &[ValidationIssue]) -> String {
    issues
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Clone, Copy)]
struct Running {
    idx: usize,
    /// Time the process starts executing (after any context switch).
    start: u64,
    /// Remaining burst when it started.
    remaining: u64,
    /// Time it will stop unless preempted: completion or quantum expiry.
    stop: u64,
}

/// Mutable simulation state: per-process lifecycle, the ready queue and the
/// trace recorded so far.
#[derive(Debug, Clone)]
pub struct EngineState {
    workload: Workload,
    index: HashMap<Pid, usize>,
    states: Vec<ProcessState>,
    remaining: Vec<u64>,
    ready: Vec<ReadyEntry>,
    next_seq: u64,
    events: Vec<TransitionEvent>,
    segments: Vec<GanttSegment>,
}

impl EngineState {
    pub fn new(workload: &Workload) -> Self {
        let index = workload
            .processes()
            .iter()
            .enumerate()
            .map(|(i, p)| (p.pid, i))
            .collect();
        Self {
            workload: workload.clone(),
            index,
            states: vec![ProcessState::New; workload.len()],
            remaining: workload.processes().iter().map(|p| p.burst).collect(),
            ready: Vec::new(),
            next_seq: 0,
            events: Vec::new(),
            segments: Vec::new(),
        }
    }

    pub fn state_of(&self, pid: Pid) -> Option<ProcessState> {
        self.index.get(&pid).map(|&i| self.states[i])
    }

    pub fn ready_queue(&self) -> &[ReadyEntry] {
        &self.ready
    }

    pub fn events(&self) -> &[TransitionEvent] {
        &self.events
    }

    fn idx(&self, pid: Pid) -> Result<usize, SimError> {
        self.index
            .get(&pid)
            .copied()
            .ok_or(SimError::UnknownPid(pid))
    }

    /// Moves `pid` through one lifecycle edge and records the event.
    pub fn transition(&mut self, pid: Pid, to: ProcessState, now: u64) -> Result<(), SimError> {
        let i = self.idx(pid)?;
        let from = self.states[i];
        if !from.can_transition_to(to) {
            return Err(SimError::IllegalTransition { pid, from, to });
        }
        self.states[i] = to;
        self.events.push(TransitionEvent {
            time: now,
            pid,
            from,
            to,
        });
        Ok(())
    }

    /// Puts `pid` at the tail of the ready queue with a fresh sequence stamp.
    /// Legal from New (admission), Waiting, and Running (preemption).
    pub fn enqueue_ready(&mut self, pid: Pid, now: u64) -> Result<(), SimError> {
        self.transition(pid, ProcessState::Ready, now)?;
        let i = self.idx(pid)?;
        let spec = &self.workload.processes()[i];
        self.ready.push(ReadyEntry {
            pid,
            arrival: spec.arrival,
            remaining: self.remaining[i],
            priority: spec.priority,
            enqueue_seq: self.next_seq,
        });
        self.next_seq += 1;
        Ok(())
    }

    fn take_ready(&mut self, pid: Pid) -> ReadyEntry {
        let pos = self
            .ready
            .iter()
            .position(|e| e.pid == pid)
            .expect("selected pid is in the ready queue");
        self.ready.remove(pos)
    }

    fn running_view(&self, run: &Running, now: u64) -> ReadyEntry {
        let spec = &self.workload.processes()[run.idx];
        ReadyEntry {
            pid: spec.pid,
            arrival: spec.arrival,
            remaining: run.remaining - (now - run.start),
            priority: spec.priority,
            enqueue_seq: u64::MAX,
        }
    }

    /// Closes the running process's segment at `now` and returns whether it
    /// has work left.
    fn stop(&mut self, run: &Running, now: u64) -> bool {
        let pid = self.workload.processes()[run.idx].pid;
        if now > run.start {
            self.segments
                .push(GanttSegment::running(pid, run.start, now));
        }
        self.remaining[run.idx] = run.remaining - (now - run.start);
        self.remaining[run.idx] > 0
    }

    fn push_idle(&mut self, start: u64, end: u64) {
        if end > start {
            self.segments.push(GanttSegment::idle(start, end));
        }
    }

    fn into_trace(mut self, makespan: u64) -> ExecutionTrace {
        self.events.sort_by_key(|e| e.time);
        ExecutionTrace {
            segments: self.segments,
            events: self.events,
            makespan,
        }
    }
}

/// Runs `workload` to completion under `policy`.
pub fn simulate(
    workload: &Workload,
    policy: &PolicySpec,
    config: &SimConfig,
) -> Result<ExecutionTrace, SimError> {
    if workload.is_empty() {
        return Err(SimError::EmptyWorkload);
    }
    let issues = workload::validate(workload);
    if !issues.is_empty() {
        return Err(SimError::InvalidWorkload(issues));
    }
    if policy.requires_priority() && !workload.has_priorities() {
        return Err(SimError::PolicyRequiresPriority(*policy));
    }

    let specs = workload.processes();
    let mut arrivals: Vec<usize> = (0..specs.len()).collect();
    arrivals.sort_by_key(|&i| specs[i].arrival);
    let mut arrivals = arrivals.into_iter().peekable();

    let quantum = policy::time_slice(policy);
    let mut st = EngineState::new(workload);
    let mut running: Option<Running> = None;
    // (time, idx) of the last process to leave the CPU
    let mut last_off: Option<(u64, usize)> = None;
    let mut now = 0u64;

    loop {
        let mut preempted = None;

        if let Some(run) = running.filter(|r| r.stop == now) {
            running = None;
            last_off = Some((now, run.idx));
            if st.stop(&run, now) {
                preempted = Some(run.idx);
            } else {
                st.transition(specs[run.idx].pid, ProcessState::Terminated, now)?;
            }
        }

        let mut admitted = Vec::new();
        while let Some(&i) = arrivals.peek() {
            if specs[i].arrival != now {
                break;
            }
            arrivals.next();
            st.enqueue_ready(specs[i].pid, now)?;
            admitted.push(st.ready.last().copied().expect("just enqueued"));
        }

        if let Some(run) = running.filter(|r| r.start <= now) {
            let view = st.running_view(&run, now);
            if admitted
                .iter()
                .any(|cand| policy::should_preempt(&view, cand, policy))
            {
                running = None;
                last_off = Some((now, run.idx));
                st.stop(&run, now);
                preempted = Some(run.idx);
            }
        }

        if let Some(i) = preempted {
            st.enqueue_ready(specs[i].pid, now)?;
        }

        if running.is_none() && !st.ready.is_empty() {
            let pid = policy::select_next(&st.ready, policy).expect("ready queue is non-empty");
            let entry = st.take_ready(pid);
            let idx = st.index[&pid];
            let switch = match last_off {
                Some((t, prev)) if t == now && prev != idx => config.context_switch_cost,
                _ => 0,
            };
            st.push_idle(now, now + switch);
            let start = now + switch;
            st.transition(pid, ProcessState::Running, start)?;
            let slice = quantum.map_or(entry.remaining, |q| q.min(entry.remaining));
            running = Some(Running {
                idx,
                start,
                remaining: entry.remaining,
                stop: start + slice,
            });
        }

        let next_arrival = arrivals.peek().map(|&i| specs[i].arrival);
        now = match (running, next_arrival) {
            (Some(run), Some(a)) => run.stop.min(a),
            (Some(run), None) => run.stop,
            (None, Some(a)) => {
                st.push_idle(now, a);
                a
            }
            (None, None) => break,
        };
    }

    Ok(st.into_trace(now))
}
