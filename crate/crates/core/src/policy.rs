//! Scheduling disciplines behind a single decision interface.
//!
//! Policies hold no queue state of their own. Queue order is carried by the
//! `enqueue_seq` stamp the engine puts on every [`ReadyEntry`], so FCFS and
//! Round Robin both reduce to "smallest stamp first".

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::workload::Pid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolicySpec {
    Fcfs,
    /// Non-preemptive shortest job first.
    Sjf,
    RoundRobin {
        quantum: u64,
    },
    Priority {
        preemptive: bool,
    },
}

/// A process waiting in the ready queue, as seen by the policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReadyEntry {
    pub pid: Pid,
    pub arrival: u64,
    pub remaining: u64,
    pub priority: Option<u32>,
    pub enqueue_seq: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolicyError {
    #[error("ready set is empty")]
    EmptyReadySet,
    #[error(
        "unknown policy `{0}` (expected fcfs, sjf, rr:<quantum>, priority or priority:preemptive)"
    )]
    Unknown(String),
    #[error("round robin quantum must be a positive integer, got `{0}`")]
    BadQuantum(String),
}

impl PolicySpec {
    pub fn round_robin(quantum: u64) -> Result<Self, PolicyError> {
        if quantum == 0 {
            return Err(PolicyError::BadQuantum("0".into()));
        }
        Ok(Self::RoundRobin { quantum })
    }

    pub fn requires_priority(&self) -> bool {
        matches!(self, Self::Priority { .. })
    }

    pub fn is_preemptive(&self) -> bool {
        matches!(
            self,
            Self::RoundRobin { .. } | Self::Priority { preemptive: true }
        )
    }
}

impl fmt::Display for PolicySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Fcfs => f.write_str("fcfs"),
            Self::Sjf => f.write_str("sjf"),
            Self::RoundRobin { quantum } => write!(f, "rr:{quantum}"),
            Self::Priority { preemptive: false } => f.write_str("priority"),
            Self::Priority { preemptive: true } => f.write_str("priority:preemptive"),
        }
    }
}

impl FromStr for PolicySpec {
    type Err = PolicyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s {
            "fcfs" => Ok(Self::Fcfs),
            "sjf" => Ok(Self::Sjf),
            "priority" => Ok(Self::Priority { preemptive: false }),
            "priority:preemptive" => Ok(Self::Priority { preemptive: true }),
            _ => match s.strip_prefix("rr:") {
                Some(q) => match q.parse::<u64>() {
                    Ok(q) if q > 0 => Ok(Self::RoundRobin { quantum: q }),
                    _ => Err(PolicyError::BadQuantum(q.to_string())),
                },
                None => Err(PolicyError::Unknown(s.to_string())),
            },
        }
    }
}

fn by_arrival_then_pid(a: &ReadyEntry, b: &ReadyEntry) -> Ordering {
    (a.arrival, a.pid).cmp(&(b.arrival, b.pid))
}

// Missing priorities sort last; the engine refuses Priority runs without them.
fn rank(entry: &ReadyEntry) -> u64 {
    entry.priority.map_or(u64::MAX, u64::from)
}

/// Picks the next process to dispatch.
///
/// FCFS and Round Robin take the smallest `enqueue_seq`. SJF takes the
/// smallest remaining time and Priority the smallest priority value, both
/// breaking ties by arrival and then pid.
pub fn select_next(ready: &[ReadyEntry], policy: &PolicySpec) -> Result<Pid, PolicyError> {
    let best = match policy {
        PolicySpec::Fcfs | PolicySpec::RoundRobin { .. } => {
            ready.iter().min_by_key(|e| e.enqueue_seq)
        }
        PolicySpec::Sjf => ready.iter().min_by(|a, b| {
            a.remaining
                .cmp(&b.remaining)
                .then_with(|| by_arrival_then_pid(a, b))
        }),
        PolicySpec::Priority { .. } => ready.iter().min_by(|a, b| {
            rank(a)
                .cmp(&rank(b))
                .then_with(|| by_arrival_then_pid(a, b))
        }),
    };
    best.map(|e| e.pid).ok_or(PolicyError::EmptyReadySet)
}

/// Whether a process that just became ready should take the CPU from the
/// running one. Only preemptive Priority ever says yes, and only for a
/// strictly more urgent candidate. Round Robin preempts on quantum expiry,
/// never on arrival.
pub fn should_preempt(running: &ReadyEntry, candidate: &ReadyEntry, policy: &PolicySpec) -> bool {
    match policy {
        PolicySpec::Priority { preemptive: true } => rank(candidate) < rank(running),
        _ => false,
    }
}

/// Maximum contiguous CPU time granted per dispatch, if bounded.
pub fn time_slice(policy: &PolicySpec) -> Option<u64> {
    match policy {
        PolicySpec::RoundRobin { quantum } => Some(*quantum),
        _ => None,
    }
}
