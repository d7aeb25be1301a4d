//! Index-range partitioning for the exhaustive checks.
//!
//! Ranges are cut into fixed-size chunks independent of the thread count,
//! each chunk is processed on the current rayon pool, and the partial
//! results come back in index order. Merges are therefore identical for any
//! number of workers.

use rayon::prelude::*;

pub const CHUNK: u64 = 1 << 16;

/// Applies `f` to consecutive subranges `[a, b)` covering `[start, end)`.
pub fn chunks<T, F>(start: u64, end: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, u64) -> T + Sync,
{
    if start >= end {
        return Vec::new();
    }
    let count = (end - start).div_ceil(CHUNK);
    (0..count)
        .into_par_iter()
        .map(|c| {
            let a = start + c * CHUNK;
            let b = (a + CHUNK).min(end);
            f(a, b)
        })
        .collect()
}

/// The first failing index over `[start, end)`, if any, with its detail.
pub fn first_failure<F>(start: u64, end: u64, f: F) -> Option<(u64, String)>
where
    F: Fn(u64, u64) -> Option<(u64, String)> + Sync,
{
    chunks(start, end, f).into_iter().flatten().next()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn covers_range_in_order() {
        let parts = chunks(3, 3 * CHUNK + 5, |a, b| (a, b));
        assert_eq!(parts.first().unwrap().0, 3);
        assert_eq!(parts.last().unwrap().1, 3 * CHUNK + 5);
        for w in parts.windows(2) {
            assert_eq!(w[0].1, w[1].0);
        }
        assert!(chunks(5, 5, |a, _| a).is_empty());
    }

    #[test]
    fn first_failure_is_lowest_index() {
        let hit = first_failure(0, 10 * CHUNK, |a, b| {
            (a..b)
                .find(|&n| n % 99_991 == 99_990 || n == 5 * CHUNK + 1)
                .map(|n| (n, String::new()))
        });
        assert_eq!(hit.unwrap().0, 99_990);
    }
}
