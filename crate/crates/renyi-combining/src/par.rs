//! Data-parallel map with a sequential fallback.
//!
//! Grid scans and randomized verification batches are embarrassingly
//! parallel: inputs are generated up front, evaluation is pure, and results
//! collect back in input order. With the `parallel` feature the work spreads
//! over rayon's ambient thread pool; without it the same helper runs a plain
//! loop, so callers never branch on the feature themselves.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map `f` over a slice, collecting results in input order.
#[cfg(feature = "parallel")]
pub(crate) fn map_slice<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

/// Map `f` over a slice, collecting results in input order.
#[cfg(not(feature = "parallel"))]
pub(crate) fn map_slice<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.iter().map(f).collect()
}
