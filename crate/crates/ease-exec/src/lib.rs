//! Deterministic data-parallel execution helpers.
//!
//! All heavy inner loops in this workspace (batch gradients, per-utterance
//! corpus synthesis, per-utterance scoring) are data-parallel maps followed by
//! an order-sensitive reduction. The helpers here guarantee that results are
//! bit-identical regardless of thread count: items are mapped independently
//! and combined in index order, never in scheduler order.
//!
//! With the `parallel` feature (default) the maps run on rayon; without it
//! they run sequentially. The `*_seq` variants are always available so
//! benchmarks can compare both paths in a single build.

/// Number of fold chunks used by [`fold_chunks`]. Fixed so that the grouping
/// of items into partial accumulators does not depend on the machine.
pub const FOLD_CHUNKS: usize = 32;

/// Order-preserving map over a slice, parallel when the `parallel` feature is
/// enabled. Output index i always corresponds to input index i.
pub fn map_collect<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(|it| f(it)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_collect_seq(items, f)
    }
}

/// Sequential version of [`map_collect`].
pub fn map_collect_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Order-preserving indexed map.
pub fn map_indexed<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(usize, &T) -> U + Sync,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().enumerate().map(|(i, it)| f(i, it)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().enumerate().map(|(i, it)| f(i, it)).collect()
    }
}

/// Deterministic chunked fold-reduce.
///
/// The item list is split into at most [`FOLD_CHUNKS`] contiguous chunks with
/// boundaries that depend only on `items.len()`. Each chunk is folded
/// sequentially in index order into its own accumulator (chunks may run in
/// parallel), and the chunk accumulators are then reduced sequentially in
/// chunk order. Floating-point accumulation order is therefore fixed.
pub fn fold_chunks<T, A, Make, Fold, Reduce>(
    items: &[T],
    make_acc: Make,
    fold: Fold,
    mut reduce: Reduce,
) -> Option<A>
where
    T: Sync,
    A: Send,
    Make: Fn() -> A + Sync,
    Fold: Fn(&mut A, usize, &T) + Sync,
    Reduce: FnMut(&mut A, A),
{
    if items.is_empty() {
        return None;
    }
    let ranges = chunk_ranges(items.len());
    let run_chunk = |r: &std::ops::Range<usize>| {
        let mut acc = make_acc();
        for i in r.clone() {
            fold(&mut acc, i, &items[i]);
        }
        acc
    };
    #[cfg(feature = "parallel")]
    let mut partials: Vec<A> = {
        use rayon::prelude::*;
        ranges.par_iter().map(run_chunk).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let mut partials: Vec<A> = ranges.iter().map(run_chunk).collect();

    let mut out = partials.remove(0);
    for p in partials {
        reduce(&mut out, p);
    }
    Some(out)
}

/// Sequential version of [`fold_chunks`]: same chunking, same order, no
/// thread pool. Produces bit-identical results to the parallel path.
pub fn fold_chunks_seq<T, A, Make, Fold, Reduce>(
    items: &[T],
    make_acc: Make,
    fold: Fold,
    mut reduce: Reduce,
) -> Option<A>
where
    Make: Fn() -> A,
    Fold: Fn(&mut A, usize, &T),
    Reduce: FnMut(&mut A, A),
{
    if items.is_empty() {
        return None;
    }
    let ranges = chunk_ranges(items.len());
    let mut partials: Vec<A> = ranges
        .iter()
        .map(|r| {
            let mut acc = make_acc();
            for i in r.clone() {
                fold(&mut acc, i, &items[i]);
            }
            acc
        })
        .collect();
    let mut out = partials.remove(0);
    for p in partials {
        reduce(&mut out, p);
    }
    Some(out)
}

/// Contiguous chunk ranges covering `0..len`, at most [`FOLD_CHUNKS`] of them.
pub fn chunk_ranges(len: usize) -> Vec<std::ops::Range<usize>> {
    let n = len.min(FOLD_CHUNKS).max(1);
    let base = len / n;
    let rem = len % n;
    let mut out = Vec::with_capacity(n);
    let mut start = 0;
    for c in 0..n {
        let sz = base + usize::from(c < rem);
        out.push(start..start + sz);
        start += sz;
    }
    out
}
