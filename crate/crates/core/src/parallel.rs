use rayon::prelude::*;
use rayon::ThreadPool;

use crate::error::{Error, Result};

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "NCCHERN_WORKERS";

/// A fixed-size worker pool. Results are always collected in input order, so
/// output never depends on the schedule or the worker count.
pub struct Workers {
    pool: ThreadPool,
}

impl Workers {
    pub fn new(count: usize) -> Result<Self> {
        let count = count.max(1);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(count)
            .build()
            .map_err(|e| Error::Argument(format!("cannot start {count} workers: {e}")))?;
        Ok(Workers { pool })
    }

    /// Pool sized from `NCCHERN_WORKERS`, falling back to one worker.
    pub fn from_env() -> Result<Self> {
        let count = match std::env::var(WORKERS_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| Error::Argument(format!("{WORKERS_ENV}={v} is not a worker count")))?,
            Err(_) => 1,
        };
        Workers::new(count)
    }

    pub fn count(&self) -> usize {
        self.pool.current_num_threads()
    }

    /// Applies `f` to every item, returning results in item order.
    pub fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        self.pool.install(|| items.par_iter().map(&f).collect())
    }
}

impl Default for Workers {
    fn default() -> Self {
        Workers::new(1).expect("single worker pool")
    }
}
