mod model;
mod tasks;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde_json::Value;

use model::{InputError, Model};
use tasks::{run_task, Record, Status};

#[derive(Parser)]
#[command(name = "monact", version, about = "Checks monoid actions on graded spaces and bundles")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the tasks of a model file.
    Run {
        model: PathBuf,
        /// Run only the named tasks (repeatable).
        #[arg(long = "task", value_name = "NAME")]
        tasks: Vec<String>,
        /// Also write one JSON record per task to this file.
        #[arg(long, value_name = "PATH")]
        machine_output: Option<PathBuf>,
        /// Run tasks concurrently; the report order is unchanged.
        #[arg(long)]
        parallel: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Cmd::Run {
        model,
        tasks,
        machine_output,
        parallel,
    } = cli.command;
    match run(&model, &tasks, machine_output.as_ref(), parallel) {
        Ok(records) => {
            if records.iter().all(|r| r.status == Status::Ok) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(
    path: &PathBuf,
    filter: &[String],
    machine: Option<&PathBuf>,
    parallel: bool,
) -> Result<Vec<Record>, InputError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError(format!("cannot read {}: {e}", path.display())))?;
    let model = Model::parse(&text)?;
    for name in filter {
        if !model.tasks.iter().any(|t| &t.name == name) {
            return Err(InputError(format!("unknown task `{name}`")));
        }
    }
    let selected: Vec<_> = model
        .tasks
        .iter()
        .filter(|t| filter.is_empty() || filter.contains(&t.name))
        .collect();
    let records: Vec<Record> = if parallel {
        selected.par_iter().map(|t| run_task(&model, t)).collect()
    } else {
        selected.iter().map(|t| run_task(&model, t)).collect()
    };
    print!("{}", render(&records));
    if let Some(p) = machine {
        let mut out = String::new();
        for r in &records {
            out.push_str(&serde_json::to_string(r).expect("records serialize"));
            out.push('\n');
        }
        std::fs::write(p, out).map_err(|e| InputError(format!("cannot write {}: {e}", p.display())))?;
    }
    Ok(records)
}

fn render(records: &[Record]) -> String {
    let mut s = String::new();
    let count = |st| records.iter().filter(|r| r.status == st).count();
    for r in records {
        let tag = match r.status {
            Status::Ok => "ok",
            Status::Violation => "violation",
            Status::Error => "error",
        };
        let _ = writeln!(s, "[{tag}] {} ({} {})", r.task, r.command, r.target);
        if let Some(w) = &r.witness {
            let _ = write!(s, "  witness at {}: {}", w.location, w.expression);
            match &w.detail {
                Some(d) => {
                    let _ = writeln!(s, " ({d})");
                }
                None => s.push('\n'),
            }
        }
        if let Some(m) = &r.message {
            let _ = writeln!(s, "  {m}");
        }
        for (k, v) in &r.artifacts {
            flatten(&mut s, k, v);
        }
    }
    let _ = writeln!(
        s,
        "{} tasks: {} ok, {} violations, {} errors",
        records.len(),
        count(Status::Ok),
        count(Status::Violation),
        count(Status::Error)
    );
    s
}

fn flatten(out: &mut String, key: &str, v: &Value) {
    match v {
        Value::Object(m) if !m.is_empty() => {
            for (k, x) in m {
                flatten(out, &format!("{key}.{k}"), x);
            }
        }
        Value::String(x) => {
            let _ = writeln!(out, "  {key} = {x}");
        }
        other => {
            let _ = writeln!(out, "  {key} = {other}");
        }
    }
}
