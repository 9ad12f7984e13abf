use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

fn cpusched(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cpusched"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cpusched-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn run_sjf_table_shows_averages() {
    let out = cpusched(&[
        "run",
        "--workload",
        &data("five_jobs.csv"),
        "--policy",
        "sjf",
        "--format",
        "table",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let avg = text.lines().find(|l| l.starts_with("avg")).unwrap();
    assert_eq!(
        avg.split_whitespace().collect::<Vec<_>>(),
        ["avg", "10.2", "5.2", "5.2"]
    );
}

#[test]
fn run_rr_gantt() {
    let out = cpusched(&[
        "run",
        "--workload",
        &data("five_jobs.csv"),
        "--policy",
        "rr:5",
        "--format",
        "gantt",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let ruler: Vec<&str> = text.lines().nth(1).unwrap().split_whitespace().collect();
    assert_eq!(ruler, ["0", "5", "7", "10", "12", "17", "22", "23", "25"]);
}

#[test]
fn priority_without_priorities_is_a_domain_error() {
    let out = cpusched(&[
        "run",
        "--workload",
        &data("five_jobs.csv"),
        "--policy",
        "priority",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("requires every process to carry a priority"));
    assert!(out.stdout.is_empty());
}

#[test]
fn compare_reproduces_both_matrices() {
    let out = cpusched(&[
        "compare",
        "--workload",
        &data("five_jobs_prio.csv"),
        "--policies",
        "fcfs,sjf,rr:5,priority",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let avgs: Vec<Vec<&str>> = text
        .lines()
        .filter(|l| l.starts_with("avg"))
        .map(|l| l.split_whitespace().skip(1).collect())
        .collect();
    assert_eq!(
        avgs,
        vec![
            vec!["17.4", "10.2", "15.4", "15.6"],
            vec!["12.4", "5.2", "10.4", "10.6"]
        ]
    );
}

#[test]
fn compare_identical_policies_gives_identical_columns() {
    let out = cpusched(&[
        "compare",
        "--workload",
        &data("five_jobs.csv"),
        "--policies",
        "sjf,sjf",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    for line in stdout(&out).lines().skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells[2], cells[3], "{line}");
    }
}

#[test]
fn compare_cells_match_single_runs() {
    let policies = ["fcfs", "sjf", "rr:5", "priority:preemptive"];
    let out = cpusched(&[
        "compare",
        "--workload",
        &data("five_jobs_prio.csv"),
        "--policies",
        &policies.join(","),
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let compared: Vec<serde_json::Value> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(compared.len(), policies.len());
    for (policy, report) in policies.iter().zip(compared) {
        let single = cpusched(&[
            "run",
            "--workload",
            &data("five_jobs_prio.csv"),
            "--policy",
            policy,
            "--format",
            "json",
        ]);
        let single: serde_json::Value = serde_json::from_slice(&single.stdout).unwrap();
        assert_eq!(single, report, "{policy}");
    }
}

#[test]
fn compare_usage_errors() {
    let out = cpusched(&[
        "compare",
        "--workload",
        &data("five_jobs.csv"),
        "--policies",
        "fcfs",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = cpusched(&[
        "compare",
        "--workload",
        &data("five_jobs.csv"),
        "--policies",
        "fcfs,sjf",
        "--format",
        "svg",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = cpusched(&[
        "compare",
        "--workload",
        &data("five_jobs.csv"),
        "--policies",
        "fcfs,lottery",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(cpusched(&[]).status.code(), Some(2));
    assert_eq!(
        cpusched(&["run", "--policy", "fcfs"]).status.code(),
        Some(2)
    );
    assert_eq!(
        cpusched(&[
            "run",
            "--workload",
            &data("five_jobs.csv"),
            "--policy",
            "fcfs",
            "--format",
            "xml"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(cpusched(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_five_jobs() {
    let out = cpusched(&["verify", "--workload", &data("five_jobs.csv")]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("best order: 1,3,2,4,0\n"), "{text}");
    assert!(text.contains("sjf order: 1,3,2,4,0\n"), "{text}");
}

#[test]
fn verify_guards() {
    let nine = scratch("nine.csv");
    let mut body = String::from("pid,arrival,burst\n");
    for i in 0..9 {
        body.push_str(&format!("{i},0,{}\n", i + 1));
    }
    std::fs::write(&nine, body).unwrap();
    let out = cpusched(&["verify", "--workload", nine.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("between 1 and 8"));

    let staggered = scratch("staggered.csv");
    std::fs::write(&staggered, "pid,arrival,burst\n0,0,3\n1,4,2\n").unwrap();
    let out = cpusched(&["verify", "--workload", staggered.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("arrival"));
}

#[test]
fn bad_workload_files() {
    let out = cpusched(&[
        "run",
        "--workload",
        "/nonexistent/w.csv",
        "--policy",
        "fcfs",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let zero = scratch("zero.csv");
    std::fs::write(&zero, "pid,arrival,burst\n0,0,0\n").unwrap();
    let out = cpusched(&[
        "run",
        "--workload",
        zero.to_str().unwrap(),
        "--policy",
        "fcfs",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("line 2"));
}

#[test]
fn out_flag_writes_file() {
    let path = scratch("fcfs.svg");
    let out = cpusched(&[
        "run",
        "--workload",
        &data("five_jobs.csv"),
        "--policy",
        "fcfs",
        "--format",
        "svg",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let svg = std::fs::read_to_string(&path).unwrap();
    assert_eq!(svg.matches("<rect").count(), 5);
}

#[test]
fn every_format_is_byte_deterministic() {
    for format in ["table", "json", "csv", "gantt", "svg"] {
        let args = [
            "run",
            "--workload",
            &data("five_jobs_prio.csv"),
            "--policy",
            "rr:5",
            "--format",
            format,
        ];
        let a = cpusched(&args);
        let b = cpusched(&args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{format}");
    }
    for format in ["table", "json", "csv", "gantt"] {
        let args = [
            "compare",
            "--workload",
            &data("five_jobs_prio.csv"),
            "--policies",
            "fcfs,sjf,rr:5,priority",
            "--format",
            format,
        ];
        assert_eq!(cpusched(&args).stdout, cpusched(&args).stdout, "{format}");
    }
}

#[test]
fn context_switch_flag() {
    let out = cpusched(&[
        "run",
        "--workload",
        &data("five_jobs.csv"),
        "--policy",
        "fcfs",
        "--format",
        "csv",
        "--context-switch",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.ends_with(",-1")).count(), 4);
    assert_eq!(
        text,
        "start,end,pid\n0,12,0\n12,13,-1\n13,15,1\n15,16,-1\n16,19,2\n19,20,-1\n20,22,3\n22,23,-1\n23,29,4\n"
    );
}
