//! Gantt-chart view of an execution trace, with ASCII and SVG renderers.

use std::fmt;
use std::fmt::Write as _;

use crate::engine::ExecutionTrace;
use crate::workload::Pid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SegmentLabel {
    Idle,
    Process(Pid),
}

impl SegmentLabel {
    pub fn pid(&self) -> Option<Pid> {
        match self {
            Self::Idle => None,
            Self::Process(pid) => Some(*pid),
        }
    }
}

impl fmt::Display for SegmentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Idle => f.write_str("--"),
            Self::Process(pid) => pid.fmt(f),
        }
    }
}

/// Half-open interval `[start, end)` during which the CPU ran `label`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GanttSegment {
    pub label: SegmentLabel,
    pub start: u64,
    pub end: u64,
}

impl GanttSegment {
    pub fn running(pid: Pid, start: u64, end: u64) -> Self {
        Self {
            label: SegmentLabel::Process(pid),
            start,
            end,
        }
    }

    pub fn idle(start: u64, end: u64) -> Self {
        Self {
            label: SegmentLabel::Idle,
            start,
            end,
        }
    }

    pub fn duration(&self) -> u64 {
        self.end - self.start
    }
}

/// Chart segments for `trace`: abutting segments with the same label are
/// merged, so a process re-dispatched right after its own preemption shows
/// as one bar. Idle never merges with a process.
pub fn build_gantt(trace: &ExecutionTrace) -> Vec<GanttSegment> {
    let mut out: Vec<GanttSegment> = Vec::with_capacity(trace.segments.len());
    for seg in trace.segments.iter().filter(|s| s.start < s.end) {
        match out.last_mut() {
            Some(last) if last.label == seg.label && last.end == seg.start => last.end = seg.end,
            _ => out.push(*seg),
        }
    }
    out
}

/// Renders a one-line bar of `| P<id> ` cells with a time ruler beneath it.
///
/// ```text
/// | P0 | P1 | P2 |
/// 0    12   14   17
/// ```
///
/// Each ruler label starts under the `|` that opens the cell beginning at
/// that time. Cells widen when a boundary label would not fit.
pub fn render_ascii(segments: &[GanttSegment]) -> String {
    if segments.is_empty() {
        return String::new();
    }
    let mut bar = String::new();
    let mut ruler = String::new();
    for seg in segments {
        let label = seg.label.to_string();
        let start = seg.start.to_string();
        let width = (label.len() + 2).max(start.len());
        let _ = write!(bar, "|{:^width$}", label);
        let _ = write!(ruler, "{:<pad$}", start, pad = width + 1);
    }
    bar.push('|');
    ruler.push_str(&segments[segments.len() - 1].end.to_string());
    format!("{bar}\n{}\n", ruler.trim_end())
}

/// Fill colors indexed by pid modulo 8.
pub const PALETTE: [&str; 8] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7",
];
pub const IDLE_FILL: &str = "#d3d3d3";
pub const ROW_HEIGHT: u64 = 40;
pub const PX_PER_MS: u64 = 10;
const MARGIN: u64 = 10;
const RULER_HEIGHT: u64 = 20;

/// Renders an SVG 1.1 document with one rect per segment.
///
/// Geometry is fixed: 10 px per ms horizontally, one 40 px row, a 10 px
/// margin and a 20 px ruler strip below the row. Process bars use
/// `PALETTE[pid % 8]`, idle bars `IDLE_FILL`.
pub fn render_svg(segments: &[GanttSegment]) -> Vec<u8> {
    let origin = segments.first().map_or(0, |s| s.start);
    let span = segments.last().map_or(0, |s| s.end) - origin;
    let width = span * PX_PER_MS + 2 * MARGIN;
    let height = ROW_HEIGHT + RULER_HEIGHT + 2 * MARGIN;

    let mut svg = String::new();
    svg.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    );
    let _ = writeln!(
        svg,
        "<g font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\">"
    );
    for seg in segments {
        let x = MARGIN + (seg.start - origin) * PX_PER_MS;
        let w = seg.duration() * PX_PER_MS;
        let fill = match seg.label {
            SegmentLabel::Idle => IDLE_FILL,
            SegmentLabel::Process(pid) => PALETTE[pid.0 as usize % PALETTE.len()],
        };
        let _ = writeln!(
            svg,
            "<rect x=\"{x}\" y=\"{MARGIN}\" width=\"{w}\" height=\"{ROW_HEIGHT}\" fill=\"{fill}\" stroke=\"#000000\"/>"
        );
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" dominant-baseline=\"middle\">{}</text>",
            x + w / 2,
            MARGIN + ROW_HEIGHT / 2,
            seg.label
        );
    }
    let mut ticks: Vec<u64> = segments.iter().map(|s| s.start).collect();
    if let Some(last) = segments.last() {
        ticks.push(last.end);
    }
    for t in ticks {
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\">{t}</text>",
            MARGIN + (t - origin) * PX_PER_MS,
            MARGIN + ROW_HEIGHT + RULER_HEIGHT - 4
        );
    }
    svg.push_str("</g>\n</svg>\n");
    svg.into_bytes()
}
