//! Seeded, parallel benchmark over random start/goal pairs.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::Instant;

use doo_route_core::world::{run_trial, Board, Outcome, TrialResult};
use serde::Serialize;

use crate::io::ConfigurationJson;

/// Reported next to the measured numbers; they come from a different board.
pub const REFERENCE_MEAN_ACTIONS: f64 = 4.34;
pub const REFERENCE_MAX_ACTIONS: usize = 9;

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub trials: usize,
    pub seed: u64,
    pub cap: usize,
    pub length_range: (f64, f64),
    /// Worker threads; 0 picks the available parallelism.
    pub threads: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub index: usize,
    /// `converged`, `cap`, `failed` or `excluded`.
    pub status: &'static str,
    pub actions: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial: Option<ConfigurationJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub goal: Option<ConfigurationJson>,
    pub configurations: Vec<Vec<i32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip)]
    pub plan_times_ns: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Reference {
    pub mean_actions: f64,
    pub max_actions: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchmarkStats {
    pub trials: usize,
    pub excluded: usize,
    pub failed: usize,
    /// Converged episodes over trials that were not excluded.
    pub success_rate: f64,
    /// Mean and max actions over episodes that ran to convergence or the cap.
    pub mean_actions: f64,
    pub max_actions: usize,
    pub plan_time_p50_us: f64,
    pub plan_time_p99_us: f64,
    pub plan_time_max_us: f64,
    pub plan_steps: usize,
    pub seed: u64,
    pub cap: usize,
    pub length_range: [f64; 2],
    pub reference: Reference,
    pub per_trial: Vec<TrialRecord>,
}

pub fn thread_count(requested: usize) -> usize {
    if requested > 0 {
        requested
    } else {
        thread::available_parallelism().map_or(1, |n| n.get())
    }
}

/// Threads requested through `DOO_ROUTE_THREADS` (0 or unset = auto).
pub fn threads_from_env() -> usize {
    std::env::var("DOO_ROUTE_THREADS").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(0)
}

fn record(index: usize, result: TrialResult) -> TrialRecord {
    let mut r = TrialRecord {
        index,
        status: "excluded",
        actions: 0,
        initial: None,
        goal: None,
        configurations: Vec::new(),
        reason: None,
        plan_times_ns: Vec::new(),
    };
    match result {
        TrialResult::Excluded { reason } => r.reason = Some(reason),
        TrialResult::Failed { reason } => {
            r.status = "failed";
            r.reason = Some(reason);
        }
        TrialResult::Ran(t) => {
            r.status = match t.outcome {
                Outcome::Converged => "converged",
                Outcome::ActionCapReached => "cap",
            };
            r.actions = t.actions();
            r.initial = Some((&t.initial).into());
            r.goal = Some((&t.goal).into());
            r.configurations = t.configurations.iter().map(|c| c.ids()).collect();
            r.plan_times_ns = t.plan_times_ns;
        }
    }
    r
}

/// Nearest-rank percentile of sorted values.
pub fn percentile(sorted: &[u64], q: f64) -> u64 {
    if sorted.is_empty() {
        return 0;
    }
    let rank = (q * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

/// Runs `cfg.trials` independent trials. Trial `i` depends only on the seed
/// and `i`, so the result does not depend on the thread count.
pub fn run_benchmark(board: &Board, cfg: &BenchConfig) -> BenchmarkStats {
    let next = AtomicUsize::new(0);
    let done = Mutex::new(Vec::with_capacity(cfg.trials));
    let workers = thread_count(cfg.threads).min(cfg.trials.max(1));
    thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| {
                let epoch = Instant::now();
                let mut clock = || epoch.elapsed().as_nanos() as u64;
                loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    if i >= cfg.trials {
                        break;
                    }
                    let result = run_trial(board, cfg.seed, i as u64, cfg.cap, cfg.length_range, &mut clock);
                    done.lock().unwrap().push(record(i, result));
                }
            });
        }
    });
    let mut per_trial = done.into_inner().unwrap();
    per_trial.sort_by_key(|r| r.index);
    summarize(per_trial, cfg)
}

fn summarize(per_trial: Vec<TrialRecord>, cfg: &BenchConfig) -> BenchmarkStats {
    let excluded = per_trial.iter().filter(|r| r.status == "excluded").count();
    let failed = per_trial.iter().filter(|r| r.status == "failed").count();
    let converged = per_trial.iter().filter(|r| r.status == "converged").count();
    let ran: Vec<&TrialRecord> = per_trial.iter().filter(|r| r.status == "converged" || r.status == "cap").collect();
    let counted = cfg.trials - excluded;
    let mut times: Vec<u64> = per_trial.iter().flat_map(|r| r.plan_times_ns.iter().copied()).collect();
    times.sort_unstable();
    let us = |ns: u64| ns as f64 / 1000.0;
    BenchmarkStats {
        trials: cfg.trials,
        excluded,
        failed,
        success_rate: if counted == 0 { 0.0 } else { converged as f64 / counted as f64 },
        mean_actions: if ran.is_empty() { 0.0 } else { ran.iter().map(|r| r.actions).sum::<usize>() as f64 / ran.len() as f64 },
        max_actions: ran.iter().map(|r| r.actions).max().unwrap_or(0),
        plan_time_p50_us: us(percentile(&times, 0.50)),
        plan_time_p99_us: us(percentile(&times, 0.99)),
        plan_time_max_us: us(times.last().copied().unwrap_or(0)),
        plan_steps: times.len(),
        seed: cfg.seed,
        cap: cfg.cap,
        length_range: [cfg.length_range.0, cfg.length_range.1],
        reference: Reference { mean_actions: REFERENCE_MEAN_ACTIONS, max_actions: REFERENCE_MAX_ACTIONS },
        per_trial,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nearest_rank() {
        let v: Vec<u64> = (1..=100).collect();
        assert_eq!(percentile(&v, 0.5), 50);
        assert_eq!(percentile(&v, 0.99), 99);
        assert_eq!(percentile(&v, 1.0), 100);
        assert_eq!(percentile(&[7], 0.99), 7);
        assert_eq!(percentile(&[], 0.5), 0);
    }
}
