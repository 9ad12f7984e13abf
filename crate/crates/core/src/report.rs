//! Byte-deterministic renderings of single runs and policy comparisons.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use crate::engine::{simulate, ExecutionTrace, SimConfig};
use crate::gantt::{build_gantt, render_ascii, render_svg};
use crate::metrics::{compute_metrics, format_decimal, ProcessMetrics, SummaryMetrics};
use crate::policy::PolicySpec;
use crate::workload::Workload;
use crate::Error;

/// Decimal places for averages.
pub const AVG_PLACES: u32 = 1;
/// Decimal places for throughput and utilization.
pub const RATE_PLACES: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Table,
    Json,
    Csv,
    Gantt,
    Svg,
}

impl OutputFormat {
    pub const ALL: [OutputFormat; 5] = [
        OutputFormat::Table,
        OutputFormat::Json,
        OutputFormat::Csv,
        OutputFormat::Gantt,
        OutputFormat::Svg,
    ];
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "table" => Ok(Self::Table),
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            "gantt" => Ok(Self::Gantt),
            "svg" => Ok(Self::Svg),
            other => Err(format!("unknown format `{other}`")),
        }
    }
}

/// One simulated policy with its metrics.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub policy: PolicySpec,
    pub workload: Workload,
    pub trace: ExecutionTrace,
    pub per_process: Vec<ProcessMetrics>,
    pub summary: SummaryMetrics,
}

#[derive(Serialize)]
struct JsonProcess {
    pid: u32,
    completion: u64,
    turnaround: u64,
    waiting: u64,
    response: u64,
}

#[derive(Serialize)]
struct JsonSummary {
    avg_turnaround: String,
    avg_waiting: String,
    avg_response: String,
    throughput_per_ms: String,
    cpu_utilization: String,
    makespan: u64,
}

#[derive(Serialize)]
struct JsonReport {
    policy: String,
    per_process: Vec<JsonProcess>,
    summary: JsonSummary,
}

impl RunReport {
    pub fn new(workload: &Workload, policy: PolicySpec, config: &SimConfig) -> Result<Self, Error> {
        let trace = simulate(workload, &policy, config)?;
        let (per_process, summary) = compute_metrics(&trace, workload)?;
        Ok(Self {
            policy,
            workload: workload.clone(),
            trace,
            per_process,
            summary,
        })
    }

    fn to_json_value(&self) -> JsonReport {
        let s = &self.summary;
        JsonReport {
            policy: self.policy.to_string(),
            per_process: self
                .per_process
                .iter()
                .map(|m| JsonProcess {
                    pid: m.pid.0,
                    completion: m.completion,
                    turnaround: m.turnaround,
                    waiting: m.waiting,
                    response: m.response,
                })
                .collect(),
            summary: JsonSummary {
                avg_turnaround: format_decimal(s.avg_turnaround, AVG_PLACES),
                avg_waiting: format_decimal(s.avg_waiting, AVG_PLACES),
                avg_response: format_decimal(s.avg_response, AVG_PLACES),
                throughput_per_ms: format_decimal(s.throughput, RATE_PLACES),
                cpu_utilization: format_decimal(s.cpu_utilization, RATE_PLACES),
                makespan: s.makespan,
            },
        }
    }

    pub fn render(&self, format: OutputFormat) -> Vec<u8> {
        match format {
            OutputFormat::Table => self.table().into_bytes(),
            OutputFormat::Json => {
                let mut out =
                    serde_json::to_string_pretty(&self.to_json_value()).expect("report serializes");
                out.push('\n');
                out.into_bytes()
            }
            OutputFormat::Csv => trace_csv(&self.trace).into_bytes(),
            OutputFormat::Gantt => render_ascii(&build_gantt(&self.trace)).into_bytes(),
            OutputFormat::Svg => render_svg(&build_gantt(&self.trace)),
        }
    }

    fn table(&self) -> String {
        let mut rows = vec![[
            "pid",
            "arrival",
            "burst",
            "completion",
            "turnaround",
            "waiting",
            "response",
        ]
        .map(String::from)
        .to_vec()];
        for (m, spec) in self.per_process.iter().zip(self.workload.processes()) {
            rows.push(vec![
                m.pid.to_string(),
                spec.arrival.to_string(),
                spec.burst.to_string(),
                m.completion.to_string(),
                m.turnaround.to_string(),
                m.waiting.to_string(),
                m.response.to_string(),
            ]);
        }
        let s = &self.summary;
        rows.push(vec![
            "avg".into(),
            String::new(),
            String::new(),
            String::new(),
            format_decimal(s.avg_turnaround, AVG_PLACES),
            format_decimal(s.avg_waiting, AVG_PLACES),
            format_decimal(s.avg_response, AVG_PLACES),
        ]);
        let mut out = format!("policy: {}\n", self.policy);
        out.push_str(&align(&rows));
        let _ = writeln!(out, "makespan: {} ms", s.makespan);
        let _ = writeln!(
            out,
            "throughput: {} processes/ms",
            format_decimal(s.throughput, RATE_PLACES)
        );
        let _ = writeln!(
            out,
            "cpu utilization: {}",
            format_decimal(s.cpu_utilization, RATE_PLACES)
        );
        out
    }
}

/// `start,end,pid` rows sorted by start; idle segments carry pid -1.
pub fn trace_csv(trace: &ExecutionTrace) -> String {
    let mut out = String::from("start,end,pid\n");
    for seg in &trace.segments {
        let pid = seg.label.pid().map_or(-1, |p| i64::from(p.0));
        let _ = writeln!(out, "{},{},{}", seg.start, seg.end, pid);
    }
    out
}

// First column left-aligned, the rest right-aligned, two spaces apart.
fn align(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| {
            rows.iter()
                .filter_map(|r| r.get(c))
                .map(String::len)
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in rows {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            if c == 0 {
                let _ = write!(line, "{:<w$}", cell, w = widths[0]);
            } else {
                let _ = write!(line, "  {:>w$}", cell, w = widths[c]);
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// Several policies run over the same workload, in declared order.
#[derive(Debug, Clone)]
pub struct Comparison {
    pub reports: Vec<RunReport>,
}

impl Comparison {
    /// Runs each policy on its own thread; results keep `policies` order.
    pub fn new(
        workload: &Workload,
        policies: &[PolicySpec],
        config: &SimConfig,
    ) -> Result<Self, Error> {
        let results: Vec<Result<RunReport, Error>> = std::thread::scope(|s| {
            let handles: Vec<_> = policies
                .iter()
                .map(|&p| s.spawn(move || RunReport::new(workload, p, config)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("simulation thread panicked"))
                .collect()
        });
        Ok(Self {
            reports: results.into_iter().collect::<Result<_, _>>()?,
        })
    }

    pub fn render(&self, format: OutputFormat) -> Result<Vec<u8>, Error> {
        Ok(match format {
            OutputFormat::Table => {
                let mut out = String::from("Turnaround time (ms)\n");
                out.push_str(&align(&self.matrix(|m| m.turnaround, |s| s.avg_turnaround)));
                out.push_str("\nWaiting time (ms)\n");
                out.push_str(&align(&self.matrix(|m| m.waiting, |s| s.avg_waiting)));
                out.into_bytes()
            }
            OutputFormat::Json => {
                let values: Vec<JsonReport> =
                    self.reports.iter().map(RunReport::to_json_value).collect();
                let mut out = serde_json::to_string_pretty(&values).expect("report serializes");
                out.push('\n');
                out.into_bytes()
            }
            OutputFormat::Csv => {
                let mut out = String::from("metric");
                let tables = [
                    (
                        "turnaround",
                        self.matrix(|m| m.turnaround, |s| s.avg_turnaround),
                    ),
                    ("waiting", self.matrix(|m| m.waiting, |s| s.avg_waiting)),
                ];
                for cell in &tables[0].1[0] {
                    out.push(',');
                    out.push_str(cell);
                }
                out.push('\n');
                for (metric, rows) in &tables {
                    for row in &rows[1..] {
                        let _ = writeln!(out, "{metric},{}", row.join(","));
                    }
                }
                out.into_bytes()
            }
            OutputFormat::Gantt => {
                let charts: Vec<String> = self
                    .reports
                    .iter()
                    .map(|r| format!("{}\n{}", r.policy, render_ascii(&build_gantt(&r.trace))))
                    .collect();
                charts.join("\n").into_bytes()
            }
            OutputFormat::Svg => return Err(Error::UnsupportedFormat("svg", "compare")),
        })
    }

    fn matrix(
        &self,
        value: impl Fn(&ProcessMetrics) -> u64,
        avg: impl Fn(&SummaryMetrics) -> crate::metrics::Rational,
    ) -> Vec<Vec<String>> {
        let mut header = vec!["pid".to_string()];
        header.extend(self.reports.iter().map(|r| r.policy.to_string()));
        let mut rows = vec![header];
        let Some(first) = self.reports.first() else {
            return rows;
        };
        for (i, m) in first.per_process.iter().enumerate() {
            let mut row = vec![m.pid.to_string()];
            row.extend(
                self.reports
                    .iter()
                    .map(|r| value(&r.per_process[i]).to_string()),
            );
            rows.push(row);
        }
        let mut avg_row = vec!["avg".to_string()];
        avg_row.extend(
            self.reports
                .iter()
                .map(|r| format_decimal(avg(&r.summary), AVG_PLACES)),
        );
        rows.push(avg_row);
        rows
    }
}
