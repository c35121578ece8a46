//! Data-parallel helpers with a sequential fallback when the `parallel`
//! feature is off. Results never depend on scheduling.

/// Index of the first item failing `ok`, if any.
#[cfg(feature = "parallel")]
pub(crate) fn first_failure<T: Sync>(items: &[T], ok: impl Fn(&T) -> bool + Sync) -> Option<usize> {
    use rayon::prelude::*;
    items.par_iter().position_first(|x| !ok(x))
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn first_failure<T>(items: &[T], ok: impl Fn(&T) -> bool) -> Option<usize> {
    items.iter().position(|x| !ok(x))
}

/// `f` applied to every item, in input order.
#[cfg(feature = "parallel")]
pub(crate) fn map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map<T, R>(items: &[T], f: impl Fn(&T) -> R) -> Vec<R> {
    items.iter().map(f).collect()
}
