//! Deterministic data-parallel scans over lexicographic k-subsets.
//!
//! The rank space `[0, C(n, k))` is cut into fixed-size blocks that do not
//! depend on the thread count. Each block is processed sequentially and the
//! per-block results come back in block order, so any fold over them is
//! identical for every schedule.

use rayon::prelude::*;

use crate::combinatorics::{binomial, Combinations};

const BLOCK: u128 = 256;

/// Runs `f` on every block of k-subsets of `0..n`, returning results in
/// lexicographic block order.
pub fn map_subset_blocks<T, F>(n: usize, k: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut dyn Iterator<Item = Vec<usize>>) -> T + Sync,
{
    let total = binomial(n, k);
    let blocks = total.div_ceil(BLOCK);
    let blocks = usize::try_from(blocks).expect("subset count too large to scan");
    (0..blocks)
        .into_par_iter()
        .map(|b| {
            let start = b as u128 * BLOCK;
            let len = (total - start).min(BLOCK) as usize;
            let mut it = Combinations::starting_at(n, k, start).take(len);
            f(&mut it)
        })
        .collect()
}

/// Runs `f` inside a dedicated pool of `threads` workers (`0` means the
/// rayon default).
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocks_cover_every_subset_in_order() {
        let flat: Vec<Vec<usize>> =
            map_subset_blocks(12, 5, |it| it.collect::<Vec<_>>()).into_iter().flatten().collect();
        let direct: Vec<_> = Combinations::new(12, 5).collect();
        assert_eq!(flat, direct);
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let one = with_threads(1, || map_subset_blocks(11, 4, |it| it.map(|c| c.iter().sum::<usize>()).sum::<usize>()));
        let many =
            with_threads(6, || map_subset_blocks(11, 4, |it| it.map(|c| c.iter().sum::<usize>()).sum::<usize>()));
        assert_eq!(one, many);
    }
}
