//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (the default) these fan work out over rayon's
//! global pool. Parallelism can also be switched off at runtime, which the
//! benchmarks use to compare both paths inside one binary. Results are
//! always returned in input order, so callers stay deterministic.

use std::sync::atomic::{AtomicBool, Ordering};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

static PARALLEL: AtomicBool = AtomicBool::new(true);

/// Enables or disables parallel execution at runtime. Has no effect when the
/// crate was built without the `parallel` feature.
pub fn set_parallel(on: bool) {
    PARALLEL.store(on, Ordering::SeqCst);
}

/// Whether the helpers below will currently use the thread pool.
pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel") && PARALLEL.load(Ordering::SeqCst)
}

pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel_enabled() {
        return items.par_iter().map(f).collect();
    }
    items.iter().map(f).collect()
}

pub fn filter_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel_enabled() {
        return items.par_iter().filter_map(f).collect();
    }
    items.iter().filter_map(f).collect()
}

/// Maps over `0..n`.
pub fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel_enabled() {
        return (0..n).into_par_iter().map(f).collect();
    }
    (0..n).map(f).collect()
}

pub fn all<T, F>(items: &[T], f: F) -> bool
where
    T: Sync,
    F: Fn(&T) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel_enabled() {
        return items.par_iter().all(f);
    }
    items.iter().all(f)
}

/// First item in input order for which `f` returns `Some`.
pub fn find_map_first<T, R, F>(items: &[T], f: F) -> Option<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel_enabled() {
        return items.par_iter().find_map_first(f);
    }
    items.iter().find_map(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn helpers_preserve_order() {
        let xs: Vec<u32> = (0..1000).collect();
        let doubled = map(&xs, |x| x * 2);
        assert_eq!(doubled, xs.iter().map(|x| x * 2).collect::<Vec<_>>());
        let odd = filter_map(&xs, |x| (x % 2 == 1).then_some(*x));
        assert_eq!(odd.len(), 500);
        assert!(odd.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(find_map_first(&xs, |x| (*x > 10).then_some(*x)), Some(11));
        assert!(all(&xs, |x| *x < 1000));
        assert_eq!(map_range(5, |i| i * i), vec![0, 1, 4, 9, 16]);
    }
}
