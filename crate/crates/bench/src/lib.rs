//! Instance fixtures shared by the benchmarks in `benches/`.

use isorefine::{Family, FamilySpec, InstancePair};

/// `count` seeded pairs of `family`, seeds `0..count`.
pub fn pairs(family: Family, negative: bool, count: u64) -> Vec<InstancePair> {
    (0..count)
        .map(|seed| {
            FamilySpec::new(family, negative, seed)
                .pair()
                .expect("valid family")
        })
        .collect()
}
