//! Thread-parallel drivers for the seeded Monte Carlo routines. Work is split
//! into the same seeded partitions as the sequential versions and merged in
//! partition order, so results match them bit for bit.

use peakeq_core::root_bounds::{self, ConjectureProbeReport};
use peakeq_core::seeds;
use peakeq_core::special::{self, RegionAreas, RegionCounts, MIN_AREA_SAMPLES};
use rayon::prelude::*;

pub fn conjecture_probe(n: usize, rho: f64, samples: usize, seed: u64) -> peakeq_core::Result<ConjectureProbeReport> {
    let reference = root_bounds::conjecture_reference(n, rho)?;
    let partials = seeds::partitions(seed, samples)
        .into_par_iter()
        .map(|(s, count)| root_bounds::probe_partition(n, rho, count, s))
        .collect::<peakeq_core::Result<Vec<_>>>()?;
    Ok(root_bounds::merge_probe(n, rho, seed, reference, partials))
}

pub fn region_areas(n: usize, samples: usize, seed: u64) -> peakeq_core::Result<RegionAreas> {
    if samples < MIN_AREA_SAMPLES {
        return Err(peakeq_core::Error::InvalidParameter(
            "area estimation needs at least 10^4 samples".into(),
        ));
    }
    let parts = seeds::partitions(seed, samples)
        .into_par_iter()
        .map(|(s, count)| special::region_partition(n, count, s))
        .collect::<peakeq_core::Result<Vec<_>>>()?;
    let (counts, outside) = parts
        .into_iter()
        .fold((RegionCounts::default(), 0), |(c, o), (p, po)| (c.merge(p), o + po));
    Ok(special::finish_areas(n, counts, outside))
}
