use std::fmt::Write as _;
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use anyhow::{bail, Context, Result};

use crate::manifest::{RunManifest, Settings};
use crate::run::{execute, failure_trace, write_trace, RunReport};

pub const BENCH_HEADER: &str = "name,n,m,q,N,T_used,wall_time_s,res_x,res_y,res_feas,app_error,status";

/// Worker count: `JOINTMM_THREADS` if set, else the machine's parallelism.
pub fn thread_cap() -> Result<usize> {
    match std::env::var("JOINTMM_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => bail!("JOINTMM_THREADS must be a positive integer, got '{v}'"),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn run_name(i: usize, r: &RunManifest) -> String {
    r.name.clone().unwrap_or_else(|| format!("run{i}"))
}

/// Runs every entry and returns the CSV text plus whether all rows converged.
pub fn bench(manifest: &RunManifest, overrides: &Settings, out: &Path) -> Result<(String, bool)> {
    let runs = &manifest.runs;
    let names: Vec<String> = runs.iter().enumerate().map(|(i, r)| run_name(i, r)).collect();
    for (i, n) in names.iter().enumerate() {
        if n.is_empty() || n.contains(['/', '\\', ',']) {
            bail!("runs[{i}].name '{n}' must be non-empty without '/', '\\' or ','");
        }
        if names[..i].contains(n) {
            bail!("runs[{i}].name '{n}' is used twice");
        }
    }
    let workers = thread_cap()?.min(runs.len()).max(1);
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<RunReport>>>> = Mutex::new((0..runs.len()).map(|_| None).collect());

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= runs.len() {
                    break;
                }
                let result = one(&runs[i], &names[i], overrides, out);
                slots.lock().expect("no worker panics while holding the lock")[i] = Some(result);
            });
        }
    });

    let mut csv = String::from(BENCH_HEADER);
    csv.push('\n');
    let mut all_ok = true;
    for (name, slot) in names.iter().zip(slots.into_inner().expect("workers joined")) {
        match slot.expect("every run is claimed") {
            Ok(r) => {
                all_ok &= r.converged;
                let status = if r.converged { "converged" } else { "exhausted" };
                let app = r.app_error.map(|e| format!("{e:?}")).unwrap_or_default();
                let _ = writeln!(
                    csv,
                    "{name},{},{},{},{},{},{:?},{:?},{:?},{:?},{app},{status}",
                    r.n,
                    r.m,
                    r.q,
                    r.inner_n,
                    r.iterations,
                    r.wall_time_s,
                    r.residuals.res_x,
                    r.residuals.res_y,
                    r.residuals.res_feas
                );
            }
            Err(e) => {
                all_ok = false;
                eprintln!("{name}: {e:#}");
                let _ = writeln!(csv, "{name},,,,,,,,,,,failed");
            }
        }
    }
    Ok((csv, all_ok))
}

/// One run; its trace file is written by the worker that owns it.
fn one(run: &RunManifest, name: &str, overrides: &Settings, out: &Path) -> Result<RunReport> {
    if !run.runs.is_empty() {
        bail!("nested run lists are not supported");
    }
    let job = run.job()?;
    if let Some(cmd) = &run.command {
        if cmd != job.kind() && cmd != "solve" {
            bail!("command '{cmd}' does not match the instance (a {} run)", job.kind());
        }
    }
    let mut s = run.solver.clone();
    s.merge(overrides);
    let with_trace = s.record_trace.unwrap_or(true);
    match execute(&job, &s, run.start.as_ref()) {
        Ok(r) => {
            if with_trace {
                write_trace(out, &format!("{name}.trace"), &r.trace)?;
            }
            Ok(r)
        }
        Err(e) => {
            if let Some(t) = failure_trace(&e).filter(|_| with_trace) {
                write_trace(out, &format!("{name}.trace"), t)?;
            }
            Err(e).with_context(|| format!("run '{name}'"))
        }
    }
}
