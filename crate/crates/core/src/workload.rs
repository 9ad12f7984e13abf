//! Process descriptions and the workload CSV format.
//!
//! A workload file is UTF-8 text whose first meaningful line is the header
//! `pid,arrival,burst` or `pid,arrival,burst,priority`. Every following line
//! describes one process; blank lines and lines starting with `#` are skipped.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Process identifier, rendered as `P<n>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Pid(pub u32);

impl fmt::Display for Pid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", self.0)
    }
}

/// Static description of one job. Times are integer milliseconds.
///
/// `priority` follows the lower-number-wins convention: a process with
/// priority 1 is more urgent than one with priority 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ProcessSpec {
    pub pid: Pid,
    pub arrival: u64,
    pub burst: u64,
    pub priority: Option<u32>,
}

impl ProcessSpec {
    pub fn new(pid: u32, arrival: u64, burst: u64) -> Self {
        Self {
            pid: Pid(pid),
            arrival,
            burst,
            priority: None,
        }
    }

    pub fn with_priority(mut self, priority: u32) -> Self {
        self.priority = Some(priority);
        self
    }
}

/// An ordered set of processes. Sequence order is submission order, which
/// breaks ties between processes admitted at the same instant.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Workload {
    processes: Vec<ProcessSpec>,
}

/// A single invariant violation found by [`validate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum ValidationIssue {
    #[error("duplicate pid {0}")]
    DuplicatePid(u32),
    #[error("process {0} has zero burst")]
    ZeroBurst(u32),
    #[error("process {0} has priority 0 (priorities start at 1)")]
    ZeroPriority(u32),
    #[error("either every process must carry a priority or none may")]
    MixedPriorityPresence,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WorkloadError {
    #[error("line {line}: malformed row: {reason}")]
    MalformedRow { line: u64, reason: String },
    #[error("line {line}: expected header `pid,arrival,burst` or `pid,arrival,burst,priority`")]
    BadHeader { line: u64 },
    #[error("missing header line")]
    MissingHeader,
    #[error("line {line}: duplicate pid {pid}")]
    DuplicatePid { line: u64, pid: u32 },
    #[error("line {line}: process {pid} has zero burst")]
    ZeroBurst { line: u64, pid: u32 },
    #[error("line {line}: process {pid} has priority 0 (priorities start at 1)")]
    ZeroPriority { line: u64, pid: u32 },
    #[error("either every process must carry a priority or none may")]
    MixedPriorityPresence,
}

impl Workload {
    /// Builds a workload without checking invariants; see [`validate`].
    pub fn new(processes: Vec<ProcessSpec>) -> Self {
        Self { processes }
    }

    pub fn processes(&self) -> &[ProcessSpec] {
        &self.processes
    }

    pub fn len(&self) -> usize {
        self.processes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.processes.is_empty()
    }

    pub fn get(&self, pid: Pid) -> Option<&ProcessSpec> {
        self.processes.iter().find(|p| p.pid == pid)
    }

    /// True when every process carries a priority. Vacuously true when empty.
    pub fn has_priorities(&self) -> bool {
        self.processes.iter().all(|p| p.priority.is_some())
    }

    pub fn total_burst(&self) -> u64 {
        self.processes.iter().map(|p| p.burst).sum()
    }

    pub fn max_burst(&self) -> u64 {
        self.processes.iter().map(|p| p.burst).max().unwrap_or(0)
    }

    /// Serializes to the canonical CSV form: no comments, no blank lines,
    /// one trailing newline per row. The priority column is emitted when
    /// any process carries a priority.
    pub fn to_csv(&self) -> String {
        let with_priority = self.processes.iter().any(|p| p.priority.is_some());
        let mut out = String::from(if with_priority {
            "pid,arrival,burst,priority\n"
        } else {
            "pid,arrival,burst\n"
        });
        for p in &self.processes {
            out.push_str(&format!("{},{},{}", p.pid.0, p.arrival, p.burst));
            if with_priority {
                out.push(',');
                if let Some(prio) = p.priority {
                    out.push_str(&prio.to_string());
                }
            }
            out.push('\n');
        }
        out
    }
}

impl FromIterator<ProcessSpec> for Workload {
    fn from_iter<I: IntoIterator<Item = ProcessSpec>>(iter: I) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

/// Returns every invariant violation in `workload`, in discovery order.
///
/// An empty workload is valid here; the simulator rejects it separately.
pub fn validate(workload: &Workload) -> Vec<ValidationIssue> {
    let mut issues = Vec::new();
    let mut seen = HashSet::new();
    for p in workload.processes() {
        if !seen.insert(p.pid) {
            issues.push(ValidationIssue::DuplicatePid(p.pid.0));
        }
        if p.burst == 0 {
            issues.push(ValidationIssue::ZeroBurst(p.pid.0));
        }
        if p.priority == Some(0) {
            issues.push(ValidationIssue::ZeroPriority(p.pid.0));
        }
    }
    let with = workload
        .processes()
        .iter()
        .filter(|p| p.priority.is_some())
        .count();
    if with != 0 && with != workload.len() {
        issues.push(ValidationIssue::MixedPriorityPresence);
    }
    issues
}

fn parse_field<T: std::str::FromStr>(raw: &str, name: &str, line: u64) -> Result<T, WorkloadError> {
    let raw = raw.trim();
    raw.parse().map_err(|_| WorkloadError::MalformedRow {
        line,
        reason: format!("{name} `{raw}` is not a non-negative decimal integer"),
    })
}

/// Parses the workload CSV format. Rows keep file order.
///
/// Errors carry the 1-based line number of the offending row.
pub fn parse_workload(text: &str) -> Result<Workload, WorkloadError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());

    let mut columns = None;
    let mut processes: Vec<ProcessSpec> = Vec::new();
    let mut seen = HashSet::new();

    for record in reader.records() {
        let record = record.map_err(|e| WorkloadError::MalformedRow {
            line: e.position().map_or(0, |p| p.line()),
            reason: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        // the csv reader yields a single empty field for whitespace-only lines
        if record.iter().all(|f| f.trim().is_empty()) {
            continue;
        }

        let Some(width) = columns else {
            let names: Vec<&str> = record.iter().map(str::trim).collect();
            columns = match names.as_slice() {
                ["pid", "arrival", "burst"] => Some(3),
                ["pid", "arrival", "burst", "priority"] => Some(4),
                _ => return Err(WorkloadError::BadHeader { line }),
            };
            continue;
        };

        if record.len() != width {
            return Err(WorkloadError::MalformedRow {
                line,
                reason: format!("expected {width} columns, found {}", record.len()),
            });
        }
        let pid: u32 = parse_field(&record[0], "pid", line)?;
        let arrival: u64 = parse_field(&record[1], "arrival", line)?;
        let burst: u64 = parse_field(&record[2], "burst", line)?;
        let priority = match record.get(3).map(str::trim) {
            None | Some("") => None,
            Some(raw) => Some(parse_field::<u32>(raw, "priority", line)?),
        };

        if !seen.insert(pid) {
            return Err(WorkloadError::DuplicatePid { line, pid });
        }
        if burst == 0 {
            return Err(WorkloadError::ZeroBurst { line, pid });
        }
        if priority == Some(0) {
            return Err(WorkloadError::ZeroPriority { line, pid });
        }
        processes.push(ProcessSpec {
            pid: Pid(pid),
            arrival,
            burst,
            priority,
        });
    }

    if columns.is_none() {
        return Err(WorkloadError::MissingHeader);
    }
    let with = processes.iter().filter(|p| p.priority.is_some()).count();
    if with != 0 && with != processes.len() {
        return Err(WorkloadError::MixedPriorityPresence);
    }
    Ok(Workload::new(processes))
}
