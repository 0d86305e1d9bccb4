//! Deterministic splitting of a sample budget into independently seeded
//! partitions. Results depend only on `(seed, samples)`, never on how many
//! threads end up running the partitions.

use alloc::vec::Vec;

/// Number of partitions a sampling budget is split into.
pub const PARTITIONS: usize = 16;

/// SplitMix64 finalizer applied to `seed` offset by the partition index.
pub fn sub_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `(sub_seed, count)` for each partition; counts sum to `total`.
pub fn partitions(seed: u64, total: usize) -> Vec<(u64, usize)> {
    let base = total / PARTITIONS;
    let extra = total % PARTITIONS;
    (0..PARTITIONS)
        .map(|i| {
            let count = base + usize::from(i < extra);
            (sub_seed(seed, i as u64), count)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_sum_and_seeds_differ() {
        let p = partitions(42, 10_007);
        assert_eq!(p.iter().map(|(_, c)| c).sum::<usize>(), 10_007);
        let mut seeds: Vec<u64> = p.iter().map(|(s, _)| *s).collect();
        seeds.sort_unstable();
        seeds.dedup();
        assert_eq!(seeds.len(), PARTITIONS);
        assert_eq!(partitions(42, 10_007), p);
    }
}
