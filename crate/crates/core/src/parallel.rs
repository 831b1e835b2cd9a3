//! Ordered data-parallel map over independent work items.
//!
//! With the `parallel` feature the map runs on rayon's pool; without it, and
//! for [`Execution::Sequential`], it is a plain iterator. Output order always
//! equals input order.

use crate::error::{Error, Result};

/// Environment variable capping the worker count (`0` or unset: automatic).
pub const THREADS_ENV: &str = "GAPLAB_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

pub fn parallel_available() -> bool {
    cfg!(feature = "parallel")
}

pub fn map_ordered<T, R, F>(items: &[T], exec: Execution, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// Parse a thread cap as found in [`THREADS_ENV`].
pub fn parse_thread_cap(raw: Option<&str>) -> Result<usize> {
    match raw.map(str::trim) {
        None | Some("") => Ok(0),
        Some(s) => s
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("{THREADS_ENV}={s:?} is not a thread count"))),
    }
}

/// Size the global pool. `0` keeps rayon's default.
pub fn configure_threads(threads: usize) -> Result<()> {
    #[cfg(feature = "parallel")]
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Error::Runtime(e.to_string()))?;
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(())
}
