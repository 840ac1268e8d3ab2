// Thin switch between rayon and sequential iteration so the crate builds
// for wasm32 without threads.

#[cfg(feature = "parallel")]
pub(crate) fn map_collect<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_collect<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    F: Fn(T) -> R,
{
    items.into_iter().map(f).collect()
}

/// Splits `[lo, hi]` into consecutive chunks of at most `len` values.
pub(crate) fn chunks(lo: u64, hi: u64, len: u64) -> Vec<(u64, u64)> {
    let len = len.max(1);
    let mut out = Vec::new();
    let mut start = lo;
    loop {
        let end = start.saturating_add(len - 1).min(hi);
        out.push((start, end));
        if end >= hi {
            break;
        }
        start = end + 1;
    }
    out
}
