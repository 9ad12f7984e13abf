//! Seeded workload generators shared by the benchmarks.

use cpusched_core::{ProcessSpec, Workload};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// `n` processes with bursts in `1..=max_burst`, priorities in `1..=8`, and
/// arrivals spread over `0..=max_arrival`.
pub fn random_workload(seed: u64, n: usize, max_burst: u64, max_arrival: u64) -> Workload {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..n)
        .map(|i| {
            ProcessSpec::new(
                i as u32,
                rng.gen_range(0..=max_arrival),
                rng.gen_range(1..=max_burst),
            )
            .with_priority(rng.gen_range(1..=8))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_and_valid() {
        let a = random_workload(7, 50, 20, 100);
        assert_eq!(a, random_workload(7, 50, 20, 100));
        assert!(cpusched_core::validate(&a).is_empty());
        assert!(a.has_priorities());
    }
}
