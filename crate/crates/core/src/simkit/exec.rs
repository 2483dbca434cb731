//! Frame scheduling.
//!
//! Frames are evaluated in batches (in parallel when the `parallel` feature
//! is on) but folded into the tallies strictly in frame order, and the stop
//! rule is checked after every single frame. Results therefore do not depend
//! on the worker count or the batch size; only the amount of discarded work
//! past the stopping frame does.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Rayon worker pool; `None` uses the global pool.
    #[default]
    Parallel,
    /// Dedicated pool with this many workers.
    Workers(usize),
}

impl Execution {
    pub fn from_workers(workers: Option<usize>) -> Self {
        match workers {
            None => Execution::Parallel,
            Some(0 | 1) => Execution::Sequential,
            Some(n) => Execution::Workers(n),
        }
    }

    fn threads(&self) -> usize {
        match self {
            Execution::Sequential => 1,
            #[cfg(feature = "parallel")]
            Execution::Parallel => rayon::current_num_threads(),
            #[cfg(feature = "parallel")]
            Execution::Workers(n) => *n,
            #[cfg(not(feature = "parallel"))]
            _ => 1,
        }
    }

    /// Runs `body` inside the pool this execution mode asks for.
    pub(crate) fn install<R: Send>(&self, body: impl FnOnce() -> R + Send) -> R {
        #[cfg(feature = "parallel")]
        if let Execution::Workers(n) = self {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(*n)
                .build()
                .expect("thread pool");
            return pool.install(body);
        }
        body()
    }

    fn map_batch<T, F>(&self, range: std::ops::Range<u64>, f: &F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync,
    {
        match self {
            Execution::Sequential => range.map(f).collect(),
            #[cfg(feature = "parallel")]
            _ => range.into_par_iter().map(f).collect(),
            #[cfg(not(feature = "parallel"))]
            _ => range.map(f).collect(),
        }
    }

    /// Evaluates `frame(i)` for `i = 0, 1, ...` up to `max_frames`, handing
    /// each result to `accept` in index order until `accept` returns `true`.
    /// Must be called inside [`Self::install`] for a dedicated pool to apply.
    pub(crate) fn run_frames<T, F, A>(&self, max_frames: u64, frame: F, mut accept: A)
    where
        T: Send,
        F: Fn(u64) -> T + Sync,
        A: FnMut(T) -> bool,
    {
        let batch = (4 * self.threads()).max(1) as u64;
        let mut start = 0;
        while start < max_frames {
            let end = (start + batch).min(max_frames);
            for result in self.map_batch(start..end, &frame) {
                if accept(result) {
                    return;
                }
            }
            start = end;
        }
    }
}
