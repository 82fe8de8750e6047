//! Deterministic inputs shared by the benchmarks.

use orbhull::lattice_cone::WeightVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `count` weight systems in dimension `n` with `gens` generators and
/// entries in `[-range, range]`.
pub fn weight_systems(count: usize, n: usize, gens: usize, range: i64, seed: u64) -> Vec<Vec<WeightVector>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (0..gens)
                .map(|_| WeightVector::new((0..n).map(|_| rng.random_range(-range..=range)).collect()))
                .collect()
        })
        .collect()
}
