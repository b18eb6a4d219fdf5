//! Order-preserving map over independent work items.
//!
//! With the `parallel` feature the map runs on rayon, either on the global
//! pool or on a dedicated pool of a requested size. Without it, or when a
//! single worker is requested, it runs on the calling thread. Results are
//! always returned in input order.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Parallelism {
    /// Worker count; `None` uses every available execution unit.
    pub workers: Option<usize>,
}

impl Parallelism {
    pub fn sequential() -> Self {
        Self { workers: Some(1) }
    }

    pub fn with_workers(workers: usize) -> Self {
        Self {
            workers: Some(workers.max(1)),
        }
    }

    pub fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        if self.workers == Some(1) {
            return items.iter().map(f).collect();
        }
        self.map_parallel(items, f)
    }

    #[cfg(feature = "parallel")]
    fn map_parallel<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        use rayon::prelude::*;
        match self.workers {
            None => items.par_iter().map(f).collect(),
            Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
                Ok(pool) => pool.install(|| items.par_iter().map(f).collect()),
                Err(_) => items.iter().map(f).collect(),
            },
        }
    }

    #[cfg(not(feature = "parallel"))]
    fn map_parallel<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        items.iter().map(f).collect()
    }
}
