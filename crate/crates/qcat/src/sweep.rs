//! Parallel sweeps. Each worker evaluates scenarios independently; outcomes
//! are merged by scenario index so the report does not depend on scheduling.

use std::time::Instant;

use qcat_core::channel::ScenarioSpace;
use qcat_core::concat::{ScenarioOutcome, VerificationReport, Verifier};
use rayon::prelude::*;

use crate::Error;

/// Logical cores, or 1 if unknown.
pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Evaluates every scenario of `space` on `workers` threads.
pub fn run_sweep(
    verifier: &Verifier,
    space: &ScenarioSpace,
    tolerance: f64,
    workers: usize,
) -> Result<VerificationReport, Error> {
    let start = Instant::now();
    let scenarios = space.scenarios();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let outcomes: Vec<ScenarioOutcome> = pool.install(|| {
        scenarios
            .par_iter()
            .enumerate()
            .map(|(i, s)| verifier.evaluate(i, s))
            .collect()
    });
    let mut report = VerificationReport::from_outcomes(space, tolerance, outcomes);
    report.wall_time = Some(start.elapsed().as_secs_f64());
    Ok(report)
}
