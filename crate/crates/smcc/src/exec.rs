use std::sync::Arc;

use rayon::{ThreadPool, ThreadPoolBuilder};
use smcc_core::cluster::{Executor, Job};

/// Environment variable that caps every thread pool this crate builds.
pub const THREADS_ENV: &str = "DASH_SMCC_THREADS";

/// `requested` threads, capped by `DASH_SMCC_THREADS` when it is set to a
/// positive integer. Never less than one.
pub fn effective_parallelism(requested: usize) -> usize {
    let cap = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&c| c > 0);
    match cap {
        Some(c) => requested.min(c),
        None => requested,
    }
    .max(1)
}

/// Runs each simulated machine as a task on a dedicated rayon pool.
#[derive(Clone)]
pub struct RayonExecutor {
    pool: Arc<ThreadPool>,
}

impl RayonExecutor {
    pub fn new(threads: usize) -> Self {
        let pool = ThreadPoolBuilder::new()
            .num_threads(threads.max(1))
            .thread_name(|i| format!("smcc-machine-{i}"))
            .build()
            .expect("failed to start machine thread pool");
        RayonExecutor { pool: Arc::new(pool) }
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Executor for RayonExecutor {
    fn execute<'a>(&self, jobs: Vec<Job<'a>>) {
        if self.threads() == 1 || jobs.len() <= 1 {
            jobs.into_iter().for_each(|job| job());
            return;
        }
        self.pool.scope(|s| {
            for job in jobs {
                s.spawn(move |_| job());
            }
        });
    }
}
