//! Indexed data-parallel map with a sequential fallback.
//!
//! Everything embarrassingly parallel in this crate (Monte Carlo ensembles,
//! per-point fractional derivatives, condition sub-integrals) funnels through
//! [`map_indexed`]. Outputs are collected in index order, so the result is
//! identical whatever the worker count — including the sequential build with
//! `--no-default-features`.

/// Map `f` over `0..n`, in parallel when the `parallel` feature is on.
#[cfg(feature = "parallel")]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

/// Map `f` over `0..n`, in parallel when the `parallel` feature is on.
#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}

/// Always-sequential variant; the criterion benches compare this against
/// [`map_indexed`] on the same workloads.
pub fn map_indexed_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}
