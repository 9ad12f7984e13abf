//! `cpusched` command-line front end.
//!
//! Exit codes: 0 on success, 1 for domain or validation errors, 2 for usage
//! errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use cpusched_core::{
    compute_metrics, enumerate_best_order, format_decimal, parse_workload, simulate, Comparison,
    Error, OutputFormat, PolicySpec, RunReport, SimConfig, Workload,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_DOMAIN: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "cpusched", version, about = "Single-CPU scheduling simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate one policy and report per-process and summary metrics.
    Run(RunArgs),
    /// Run several policies over one workload and tabulate them side by side.
    Compare(CompareArgs),
    /// Check that SJF reaches the exhaustive minimum average waiting time.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
    Gantt,
    Svg,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Table => OutputFormat::Table,
            Format::Json => OutputFormat::Json,
            Format::Csv => OutputFormat::Csv,
            Format::Gantt => OutputFormat::Gantt,
            Format::Svg => OutputFormat::Svg,
        }
    }
}

#[derive(Debug, Args)]
pub struct Common {
    /// Workload CSV (`pid,arrival,burst[,priority]`).
    #[arg(long)]
    pub workload: PathBuf,
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
    /// Context switch cost in ms.
    #[arg(long = "context-switch", default_value_t = 0)]
    pub context_switch: u64,
    /// Write output here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A single `run` invocation.
#[derive(Debug, Args)]
pub struct RunArgs {
    /// fcfs, sjf, rr:<quantum>, priority or priority:preemptive
    #[arg(long)]
    pub policy: PolicySpec,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Comma-separated policies, at least two.
    #[arg(long, value_delimiter = ',', required = true)]
    pub policies: Vec<PolicySpec>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub workload: PathBuf,
}

/// Failure carrying the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn domain(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_DOMAIN,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnsupportedFormat(..) | Error::Policy(_) => Self::usage(e.to_string()),
            _ => Self::domain(e.to_string()),
        }
    }
}

fn load(path: &Path) -> Result<Workload, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::domain(format!("{}: {e}", path.display())))?;
    parse_workload(&text).map_err(|e| Failure::domain(format!("{}: {e}", path.display())))
}

fn emit(out: &Option<PathBuf>, bytes: &[u8], stdout: &mut dyn Write) -> Result<(), Failure> {
    match out {
        Some(path) => {
            fs::write(path, bytes).map_err(|e| Failure::domain(format!("{}: {e}", path.display())))
        }
        None => stdout
            .write_all(bytes)
            .map_err(|e| Failure::domain(format!("stdout: {e}"))),
    }
}

fn config(common: &Common) -> SimConfig {
    SimConfig {
        context_switch_cost: common.context_switch,
    }
}

pub fn cmd_run(args: &RunArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let workload = load(&args.common.workload)?;
    let report = RunReport::new(&workload, args.policy, &config(&args.common))?;
    emit(
        &args.common.out,
        &report.render(args.common.format.into()),
        stdout,
    )
}

pub fn cmd_compare(args: &CompareArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    if args.policies.len() < 2 {
        return Err(Failure::usage("compare needs at least two policies"));
    }
    if args.common.format == Format::Svg {
        return Err(Error::UnsupportedFormat("svg", "compare").into());
    }
    let workload = load(&args.common.workload)?;
    let comparison = Comparison::new(&workload, &args.policies, &config(&args.common))?;
    emit(
        &args.common.out,
        &comparison.render(args.common.format.into())?,
        stdout,
    )
}

/// Returns whether SJF was optimal; the caller maps `false` to exit 1.
pub fn cmd_verify(args: &VerifyArgs, stdout: &mut dyn Write) -> Result<bool, Failure> {
    let workload = load(&args.workload)?;
    let best = enumerate_best_order(&workload).map_err(Error::from)?;
    let trace =
        simulate(&workload, &PolicySpec::Sjf, &SimConfig::default()).map_err(Error::from)?;
    let (_, summary) = compute_metrics(&trace, &workload).map_err(Error::from)?;
    let optimal = summary.avg_waiting == best.best_avg_waiting;

    let join = |pids: &[cpusched_core::Pid]| {
        pids.iter()
            .map(|p| p.0.to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    let text = format!(
        "orders evaluated: {}\nbest order: {}\nbest average waiting: {} ms\nsjf order: {}\nsjf average waiting: {} ms\nsjf optimal: {}\n",
        best.evaluated_count,
        join(&best.best_order),
        format_decimal(best.best_avg_waiting, 1),
        join(&trace.dispatch_order()),
        format_decimal(summary.avg_waiting, 1),
        if optimal { "yes" } else { "no" },
    );
    emit(&None, text.as_bytes(), stdout)?;
    Ok(optimal)
}

/// Parses `args` and runs the chosen subcommand, returning the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    let result = match &cli.command {
        Command::Run(args) => cmd_run(args, stdout),
        Command::Compare(args) => cmd_compare(args, stdout),
        Command::Verify(args) => cmd_verify(args, stdout).and_then(|optimal| {
            if optimal {
                Ok(())
            } else {
                Err(Failure::domain("sjf did not reach the optimum"))
            }
        }),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}
