//! Range-partitioned map/reduce with a sequential fallback.
//!
//! With the `parallel` feature the chunks are folded on the rayon pool;
//! without it (or with [`Exec::Sequential`]) they are folded in order on
//! the calling thread. Chunk results are always combined left to right, so
//! any associative `reduce` yields the same value in both modes.

use std::ops::Range;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// Whether this build can actually run work in parallel.
    pub fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }
}

fn chunks(len: u64, chunk: u64) -> impl Iterator<Item = Range<u64>> + Clone {
    let chunk = chunk.max(1);
    let count = len.div_ceil(chunk);
    (0..count).map(move |i| i * chunk..((i + 1) * chunk).min(len))
}

/// Folds `0..len` in chunks of `chunk` indices and reduces the chunk results in order.
pub fn map_reduce<R, FM, FI, FR>(exec: Exec, len: u64, chunk: u64, map: FM, identity: FI, reduce: FR) -> R
where
    R: Send,
    FM: Fn(Range<u64>) -> R + Sync + Send,
    FI: Fn() -> R + Sync + Send,
    FR: Fn(R, R) -> R + Sync + Send,
{
    match exec {
        Exec::Sequential => sequential(len, chunk, map, identity, reduce),
        Exec::Parallel => actual::parallel(len, chunk, map, identity, reduce),
    }
}

fn sequential<R, FM, FI, FR>(len: u64, chunk: u64, map: FM, identity: FI, reduce: FR) -> R
where
    FM: Fn(Range<u64>) -> R,
    FI: Fn() -> R,
    FR: Fn(R, R) -> R,
{
    chunks(len, chunk).map(map).fold(identity(), reduce)
}

/// Runs `op` on a pool with `workers` threads (`None` = rayon default).
pub fn with_workers<T, F>(workers: Option<usize>, op: F) -> T
where
    T: Send,
    F: FnOnce() -> T + Send,
{
    actual::with_workers(workers, op)
}

#[cfg(feature = "parallel")]
mod actual {
    use super::chunks;
    use rayon::prelude::*;
    use std::ops::Range;

    pub fn parallel<R, FM, FI, FR>(len: u64, chunk: u64, map: FM, identity: FI, reduce: FR) -> R
    where
        R: Send,
        FM: Fn(Range<u64>) -> R + Sync + Send,
        FI: Fn() -> R + Sync + Send,
        FR: Fn(R, R) -> R + Sync + Send,
    {
        let ranges: Vec<Range<u64>> = chunks(len, chunk).collect();
        ranges.into_par_iter().map(map).reduce(identity, reduce)
    }

    pub fn with_workers<T, F>(workers: Option<usize>, op: F) -> T
    where
        T: Send,
        F: FnOnce() -> T + Send,
    {
        match workers {
            Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
                Ok(pool) => pool.install(op),
                Err(_) => op(),
            },
            None => op(),
        }
    }
}

#[cfg(not(feature = "parallel"))]
mod actual {
    use std::ops::Range;

    pub fn parallel<R, FM, FI, FR>(len: u64, chunk: u64, map: FM, identity: FI, reduce: FR) -> R
    where
        FM: Fn(Range<u64>) -> R,
        FI: Fn() -> R,
        FR: Fn(R, R) -> R,
    {
        super::sequential(len, chunk, map, identity, reduce)
    }

    pub fn with_workers<T, F>(_workers: Option<usize>, op: F) -> T
    where
        F: FnOnce() -> T,
    {
        op()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunking_covers_range_exactly() {
        let parts: Vec<_> = chunks(10, 3).collect();
        assert_eq!(parts, vec![0..3, 3..6, 6..9, 9..10]);
        assert_eq!(chunks(0, 3).count(), 0);
    }

    #[test]
    fn both_modes_agree_on_ordered_concatenation() {
        let run = |exec| {
            map_reduce(
                exec,
                1000,
                7,
                |r| r.filter(|i| i % 13 == 0).collect::<Vec<_>>(),
                Vec::new,
                |mut a, b| {
                    a.extend(b);
                    a
                },
            )
        };
        let seq = run(Exec::Sequential);
        assert_eq!(seq, run(Exec::Parallel));
        assert_eq!(seq, (0..1000).filter(|i| i % 13 == 0).collect::<Vec<_>>());
        assert_eq!(with_workers(Some(3), || run(Exec::Parallel)), seq);
    }
}
